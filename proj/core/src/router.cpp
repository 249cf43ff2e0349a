#include "wxroute/router.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wxroute/error.hpp"
#include "wxroute/text.hpp"

namespace wxroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNoPred = static_cast<std::size_t>(-1);

} // namespace

LayeredSolution solve_layered(std::span<const std::size_t> rank_sizes, Hours depart, const LayerArcFn& cost) {
    if (rank_sizes.size() < 2 || rank_sizes.front() != 1 || rank_sizes.back() != 1) {
        throw Error(Errc::InvalidArgument, "layered problem needs single-node first and last ranks");
    }
    const std::size_t ranks = rank_sizes.size();

    std::vector<std::vector<Hours>> label(ranks);
    std::vector<std::vector<std::size_t>> pred(ranks);
    std::vector<std::vector<double>> heading(ranks);
    for (std::size_t r = 0; r < ranks; ++r) {
        if (rank_sizes[r] == 0) throw Error(Errc::InvalidArgument, "empty rank in layered problem");
        label[r].assign(rank_sizes[r], kInf);
        pred[r].assign(rank_sizes[r], kNoPred);
        heading[r].assign(rank_sizes[r], std::numeric_limits<double>::quiet_NaN());
    }
    label[0][0] = depart;

    for (std::size_t r = 0; r + 1 < ranks; ++r) {
        // predecessor-major loop with strict '<' keeps the lowest index on ties
        for (std::size_t i = 0; i < rank_sizes[r]; ++i) {
            const Hours t = label[r][i];
            if (!std::isfinite(t)) continue;
            for (std::size_t j = 0; j < rank_sizes[r + 1]; ++j) {
                const LayerArc arc = cost(r, i, j, t);
                if (std::isnan(arc.hours) || arc.hours <= 0.0) {
                    throw Error(Errc::InvalidArgument, "arc costs must be positive");
                }
                if (!std::isfinite(arc.hours)) continue;
                const Hours arrive = t + arc.hours;
                if (arrive < label[r + 1][j]) {
                    label[r + 1][j] = arrive;
                    pred[r + 1][j] = i;
                    heading[r + 1][j] = arc.heading_deg;
                }
            }
        }
    }

    LayeredSolution sol;
    if (!std::isfinite(label[ranks - 1][0])) return sol;

    sol.feasible = true;
    sol.positions.assign(ranks, 0);
    sol.arrivals.assign(ranks, 0.0);
    sol.headings.assign(ranks, std::numeric_limits<double>::quiet_NaN());
    std::size_t pos = 0;
    for (std::size_t r = ranks; r-- > 0;) {
        sol.positions[r] = pos;
        sol.arrivals[r] = label[r][pos];
        if (r > 0) {
            sol.headings[r - 1] = heading[r][pos];
            pos = pred[r][pos];
        }
    }
    return sol;
}

RouteResult shortest_path(const RoutingGrid& grid, const PerformanceModel& model, const EnvironmentField& field,
                          Hours depart) {
    model.validate();
    if (!field.covers_time(depart)) {
        (void)field.time_index(depart); // throws OutOfDomain with a readable message
    }

    std::vector<std::size_t> sizes(grid.rank_count());
    for (std::size_t r = 0; r < sizes.size(); ++r) sizes[r] = grid.nodes_in_rank(r);

    // A label past the end of the weather record can only lead to an arrival
    // past it too (arrival times never decrease along a path), so such nodes
    // are pruned rather than failing the whole solve. Only when the finish
    // itself is lost this way is the run out of domain.
    Hours latest_pruned = -std::numeric_limits<double>::infinity();
    const auto cost = [&](std::size_t rank, std::size_t from, std::size_t to, Hours t) -> LayerArc {
        if (!field.covers_time(t)) {
            latest_pruned = std::max(latest_pruned, t);
            return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN()};
        }
        const ArcCost c = arc_cost(model, field, grid.node({rank, from}), grid.node({rank + 1, to}), t);
        return {c.hours, c.heading_deg};
    };
    const LayeredSolution sol = solve_layered(sizes, depart, cost);
    if (!sol.feasible && std::isfinite(latest_pruned)) {
        std::ostringstream os;
        os << "every route reaching the finish leaves the weather record (a node is reached at "
           << format_iso8601(latest_pruned) << ")";
        throw Error(Errc::OutOfDomain, os.str());
    }

    RouteResult result;
    result.depart = depart;
    if (!sol.feasible) {
        result.voyaging_time_hours = std::numeric_limits<double>::quiet_NaN();
        return result;
    }
    const Hours arrival = sol.arrivals.back();
    if (!field.covers_time(arrival)) {
        std::ostringstream os;
        os << "route arrives at " << format_iso8601(arrival) << ", after the weather record ends";
        throw Error(Errc::OutOfDomain, os.str());
    }
    result.feasible = true;
    result.voyaging_time_hours = arrival - depart;
    result.path.reserve(sizes.size());
    for (std::size_t r = 0; r < sizes.size(); ++r) {
        const NodeIndex idx{r, sol.positions[r]};
        result.path.push_back({idx, grid.node(idx), sol.arrivals[r], sol.headings[r]});
    }
    return result;
}

void write_route_geojson(std::ostream& out, const RouteResult& route) {
    using json = nlohmann::ordered_json;
    json coords = json::array();
    json arrivals = json::array();
    json elapsed = json::array();
    json headings = json::array();
    for (const auto& v : route.path) {
        coords.push_back({v.point.lon(), v.point.lat()});
        arrivals.push_back(format_iso8601(v.arrival));
        elapsed.push_back(v.arrival - route.depart);
        headings.push_back(std::isnan(v.heading_deg) ? json(nullptr) : json(v.heading_deg));
    }
    json props;
    props["feasible"] = route.feasible;
    props["depart"] = format_iso8601(route.depart);
    props["voyaging_time_hours"] =
        route.feasible ? json(route.voyaging_time_hours) : json(nullptr);
    props["arrival_times"] = std::move(arrivals);
    props["arrival_hours"] = std::move(elapsed);
    props["heading_deg"] = std::move(headings);

    json feature;
    feature["type"] = "Feature";
    feature["geometry"] = route.feasible ? json{{"type", "LineString"}, {"coordinates", std::move(coords)}}
                                         : json(nullptr);
    feature["properties"] = std::move(props);
    out << feature.dump(2) << '\n';
}

void write_route_csv(std::ostream& out, const RouteResult& route) {
    out << "rank,position,lat,lon,arrival_hours,heading_deg\n";
    for (const auto& v : route.path) {
        out << v.node.rank << ',' << v.node.position << ',' << text::format_double(v.point.lat()) << ','
            << text::format_double(v.point.lon()) << ',' << text::format_double(v.arrival - route.depart) << ','
            << (std::isnan(v.heading_deg) ? std::string() : text::format_double(v.heading_deg)) << '\n';
    }
}

} // namespace wxroute
