#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "wxroute/geo.hpp"

namespace wxroute {

/// Latitude beyond which cross-track construction is refused.
inline constexpr double kMaxGridLatitude = 85.0;
/// Smallest node spacing for which haversine arc lengths are trusted.
inline constexpr double kMinNodeSpacingNm = 1.0;

struct GridSpec {
    GeoPoint start;
    GeoPoint finish;
    double node_spacing_nm;

    /// Throws InvalidArgument when spacing < 1 nm or start == finish.
    void validate() const;
};

/// Rank 0 is the start node, ranks 1..n are interior, rank n + 1 is the finish.
/// Positions run from the most port-side (negative cross-track offset) node.
struct NodeIndex {
    std::size_t rank = 0;
    std::size_t position = 0;

    friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

class RoutingGrid {
public:
    RoutingGrid(GridSpec spec, std::vector<GeoPoint> anchors, std::vector<std::vector<GeoPoint>> ranks);

    const GridSpec& spec() const noexcept { return spec_; }

    /// Number of interior ranks, equal to the number of nodes per interior rank.
    std::size_t size() const noexcept { return interior_.size(); }

    /// Total rank count including the start and finish virtual ranks.
    std::size_t rank_count() const noexcept { return interior_.size() + 2; }

    std::size_t nodes_in_rank(std::size_t rank) const;

    const GeoPoint& node(NodeIndex idx) const;

    /// Great-circle anchor of interior rank k (1-based).
    const GeoPoint& anchor(std::size_t rank) const;

    const GeoPoint& start() const noexcept { return spec_.start; }
    const GeoPoint& finish() const noexcept { return spec_.finish; }

    /// Every node of the next rank; the finish node for the last interior
    /// rank; nothing for the finish node itself.
    std::vector<NodeIndex> successors(NodeIndex idx) const;

    /// Debug dump: rank,position,lat,lon including the start and finish ranks.
    void write_csv(std::ostream& os) const;

private:
    GridSpec spec_;
    std::vector<GeoPoint> anchors_;
    std::vector<std::vector<GeoPoint>> interior_;
};

/// Interior rank count n = ceil(D / d_n) - 1 for a great-circle distance D.
std::size_t interior_rank_count(double distance_nm, double node_spacing_nm) noexcept;

/// Signed cross-track offset, in multiples of d_n, of position `pos` in an
/// n-node rank.
double cross_track_offset_units(std::size_t n, std::size_t pos) noexcept;

/// Throws GridTooSmall when no interior rank fits and PoleProximity when a
/// node falls poleward of 85 degrees.
RoutingGrid build_grid(const GridSpec& spec);

} // namespace wxroute
