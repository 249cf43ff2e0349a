#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "wxroute/env.hpp"
#include "wxroute/grid.hpp"
#include "wxroute/perf.hpp"
#include "wxroute/time.hpp"

namespace wxroute {

struct LayerArc {
    double hours = 0.0; ///< must be > 0, or +infinity for an impassable arc
    double heading_deg = 0.0;
};

/// Cost of leaving position `from` of rank `rank` for position `to` of rank
/// `rank + 1` at time `depart`.
using LayerArcFn = std::function<LayerArc(std::size_t rank, std::size_t from, std::size_t to, Hours depart)>;

struct LayeredSolution {
    bool feasible = false;
    std::vector<std::size_t> positions; ///< chosen position in every rank
    std::vector<Hours> arrivals;        ///< earliest arrival per rank
    std::vector<double> headings;       ///< heading of the leg leaving each rank
};

/// Earliest-arrival label setting over a layered DAG, one rank at a time.
/// Rank 0 and the last rank must each hold one node. Ties go to the lowest
/// predecessor position. The cost callback is only invoked from reachable
/// nodes, so it may assume a finite departure time.
LayeredSolution solve_layered(std::span<const std::size_t> rank_sizes, Hours depart, const LayerArcFn& cost);

struct RouteVertex {
    NodeIndex node;
    GeoPoint point;
    Hours arrival;
    double heading_deg; ///< heading sailed when leaving this vertex; NaN at the finish
};

struct RouteResult {
    bool feasible = false;
    Hours depart = 0.0;
    double voyaging_time_hours = 0.0; ///< NaN when infeasible
    std::vector<RouteVertex> path;    ///< empty when infeasible
};

/// Minimum-time route from the grid start to the finish departing at `depart`.
/// Nodes reached after the weather record ends are pruned; throws OutOfDomain
/// when that leaves no route, or when the best arrival is past the record.
RouteResult shortest_path(const RoutingGrid& grid, const PerformanceModel& model, const EnvironmentField& field,
                          Hours depart);

/// GeoJSON Feature with a LineString geometry; per-vertex arrival times and
/// headings are carried as property arrays.
void write_route_geojson(std::ostream& out, const RouteResult& route);

/// Columns rank,position,lat,lon,arrival_hours (elapsed since departure),heading_deg.
void write_route_csv(std::ostream& out, const RouteResult& route);

} // namespace wxroute
