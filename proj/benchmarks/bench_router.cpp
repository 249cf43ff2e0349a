#include <benchmark/benchmark.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "wxroute/router.hpp"

using namespace wxroute;

namespace {

EnvironmentField bench_field() {
    return test::functional_field(-32, -10, -180, -148, 1.0, 0.0, 120, [](double la, double lo, Hours t) -> std::array<double, 3> {
        const double ang = 0.3 * la - 0.1 * lo + 0.04 * t;
        const double spd = 12.0 + 4.0 * std::sin(0.05 * lo + 0.02 * t);
        return {spd * std::sin(ang), spd * std::cos(ang), 1.2 + 0.4 * std::sin(0.2 * la)};
    });
}

// Tonga to the Cook Islands at decreasing node spacing.
void BM_ShortestPath(benchmark::State& state) {
    static const EnvironmentField field = bench_field();
    const PerformanceModel model = make_performance_model(test::graded_polar());
    const RoutingGrid grid = build_grid({{-21.1, -175.2}, {-21.2, -159.8}, static_cast<double>(state.range(0))});
    for (auto _ : state) {
        benchmark::DoNotOptimize(shortest_path(grid, model, field, 0.0));
    }
    state.counters["n"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_ShortestPath)->Arg(80)->Arg(40)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ArcCost(benchmark::State& state) {
    static const EnvironmentField field = bench_field();
    const PerformanceModel model = make_performance_model(test::graded_polar());
    const GeoPoint a{-20.0, -170.0}, b{-19.8, -169.6};
    for (auto _ : state) {
        benchmark::DoNotOptimize(arc_cost(model, field, a, b, 12.0));
    }
}
BENCHMARK(BM_ArcCost);

} // namespace
