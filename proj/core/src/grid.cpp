#include "wxroute/grid.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "wxroute/error.hpp"
#include "wxroute/text.hpp"

namespace wxroute {

namespace {

// Absorbs round-off in D / d_n so that a nominal 100 nm route at 25 nm
// spacing yields 3 interior ranks rather than 4.
constexpr double kRankCountSlack = 1e-9;

} // namespace

void GridSpec::validate() const {
    if (!(node_spacing_nm >= kMinNodeSpacingNm) || !std::isfinite(node_spacing_nm)) {
        std::ostringstream os;
        os << "node spacing " << node_spacing_nm << " nm is below the " << kMinNodeSpacingNm << " nm floor";
        throw Error(Errc::InvalidArgument, os.str());
    }
    if (start == finish) {
        throw Error(Errc::InvalidArgument, "start and finish coincide");
    }
}

RoutingGrid::RoutingGrid(GridSpec spec, std::vector<GeoPoint> anchors, std::vector<std::vector<GeoPoint>> ranks)
    : spec_(spec), anchors_(std::move(anchors)), interior_(std::move(ranks)) {
    if (anchors_.size() != interior_.size()) {
        throw Error(Errc::InvalidArgument, "one anchor per interior rank required");
    }
    for (const auto& r : interior_) {
        if (r.size() != interior_.size()) {
            throw Error(Errc::InvalidArgument, "interior ranks must be square (n ranks x n nodes)");
        }
    }
}

std::size_t RoutingGrid::nodes_in_rank(std::size_t rank) const {
    if (rank == 0 || rank == interior_.size() + 1) return 1;
    if (rank > interior_.size() + 1) throw Error(Errc::InvalidArgument, "rank out of range");
    return interior_[rank - 1].size();
}

const GeoPoint& RoutingGrid::node(NodeIndex idx) const {
    if (idx.position >= nodes_in_rank(idx.rank)) {
        throw Error(Errc::InvalidArgument, "node position out of range");
    }
    if (idx.rank == 0) return spec_.start;
    if (idx.rank == interior_.size() + 1) return spec_.finish;
    return interior_[idx.rank - 1][idx.position];
}

const GeoPoint& RoutingGrid::anchor(std::size_t rank) const {
    if (rank == 0 || rank > anchors_.size()) throw Error(Errc::InvalidArgument, "anchor rank out of range");
    return anchors_[rank - 1];
}

std::vector<NodeIndex> RoutingGrid::successors(NodeIndex idx) const {
    (void)node(idx); // range check
    const std::size_t next = idx.rank + 1;
    if (next >= rank_count()) return {};
    std::vector<NodeIndex> out;
    out.reserve(nodes_in_rank(next));
    for (std::size_t p = 0; p < nodes_in_rank(next); ++p) out.push_back({next, p});
    return out;
}

void RoutingGrid::write_csv(std::ostream& os) const {
    os << "rank,position,lat,lon\n";
    for (std::size_t r = 0; r < rank_count(); ++r) {
        for (std::size_t p = 0; p < nodes_in_rank(r); ++p) {
            const GeoPoint& g = node({r, p});
            os << r << ',' << p << ',' << text::format_double(g.lat()) << ',' << text::format_double(g.lon())
               << '\n';
        }
    }
}

std::size_t interior_rank_count(double distance_nm, double node_spacing_nm) noexcept {
    const double ratio = distance_nm / node_spacing_nm;
    if (!(ratio > 1.0)) return 0;
    const double segments = std::ceil(ratio - kRankCountSlack);
    return segments < 2.0 ? 0 : static_cast<std::size_t>(segments) - 1;
}

double cross_track_offset_units(std::size_t n, std::size_t pos) noexcept {
    const auto half = static_cast<double>(n - 1) / 2.0;
    // Odd n: -(n-1)/2 .. (n-1)/2. Even n: -(n-1)/2 .. (n-1)/2 in steps of one,
    // which is the same set as (m + 0.5) for m in -n/2 .. n/2 - 1.
    return static_cast<double>(pos) - half;
}

RoutingGrid build_grid(const GridSpec& spec) {
    spec.validate();
    const double distance = haversine_distance(spec.start, spec.finish);
    const std::size_t n = interior_rank_count(distance, spec.node_spacing_nm);
    if (n < 1) {
        std::ostringstream os;
        os << "route of " << distance << " nm admits no interior rank at d_n = " << spec.node_spacing_nm << " nm";
        throw Error(Errc::GridTooSmall, os.str());
    }

    std::vector<GeoPoint> anchors;
    std::vector<std::vector<GeoPoint>> ranks;
    anchors.reserve(n);
    ranks.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double fraction = static_cast<double>(k) / static_cast<double>(n + 1);
        const GeoPoint anchor = great_circle_intermediate(spec.start, spec.finish, fraction);
        const double track = initial_bearing(anchor, spec.finish);

        std::vector<GeoPoint> rank;
        rank.reserve(n);
        for (std::size_t p = 0; p < n; ++p) {
            const double units = cross_track_offset_units(n, p);
            const double bearing = units < 0.0 ? track - 90.0 : track + 90.0;
            GeoPoint node = destination_point(anchor, normalize_bearing(bearing), std::fabs(units) * spec.node_spacing_nm);
            if (std::fabs(node.lat()) > kMaxGridLatitude) {
                std::ostringstream os;
                os << "grid node at latitude " << node.lat() << " lies poleward of " << kMaxGridLatitude << " degrees";
                throw Error(Errc::PoleProximity, os.str());
            }
            rank.push_back(node);
        }
        anchors.push_back(anchor);
        ranks.push_back(std::move(rank));
    }
    if (std::fabs(spec.start.lat()) > kMaxGridLatitude || std::fabs(spec.finish.lat()) > kMaxGridLatitude) {
        throw Error(Errc::PoleProximity, "route endpoint lies poleward of 85 degrees");
    }
    return RoutingGrid(spec, std::move(anchors), std::move(ranks));
}

} // namespace wxroute
