#include <benchmark/benchmark.h>

#include <cmath>

#include "wxroute/gci.hpp"

using namespace wxroute;

namespace {

GridTriplet triplet(double h1, double h2, double h3) {
    const auto f = [](double h) { return 266.0 + 0.05 * std::pow(h, 1.7); };
    return {{{{h1, f(h1)}, {h2, f(h2)}, {h3, f(h3)}}}};
}

void BM_ConvergenceConstantRatio(benchmark::State& state) {
    const GridTriplet t = triplet(5, 10, 20);
    for (auto _ : state) benchmark::DoNotOptimize(analyze_convergence(t));
}
BENCHMARK(BM_ConvergenceConstantRatio);

void BM_ConvergenceMixedRatio(benchmark::State& state) {
    const GridTriplet t = triplet(15, 20, 40);
    for (auto _ : state) benchmark::DoNotOptimize(analyze_convergence(t));
}
BENCHMARK(BM_ConvergenceMixedRatio);

} // namespace
