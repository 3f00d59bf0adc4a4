#include <benchmark/benchmark.h>

#include "poncelet/families.hpp"
#include "poncelet/grid.hpp"
#include "poncelet/invariants.hpp"

using namespace poncelet;

namespace {

const Ellipse& table() {
    static const Ellipse e(2.0, 1.0);
    return e;
}

const PeriodicCaustic& heptagon() {
    static const PeriodicCaustic pc = find_periodic_caustic(table(), 7, 1);
    return pc;
}

void BM_BilliardStep(benchmark::State& state) {
    PhasePoint pp = launch_tangent(table(), heptagon().mu_star, 0.3);
    for (auto _ : state) {
        pp = billiard_step(table(), pp);
        benchmark::DoNotOptimize(pp);
    }
}
BENCHMARK(BM_BilliardStep);

void BM_Orbit7(benchmark::State& state) {
    const PhasePoint pp = launch_tangent(table(), heptagon().mu_star, 0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(orbit(table(), pp, 7));
    }
}
BENCHMARK(BM_Orbit7);

void BM_FindPeriodicCaustic(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_periodic_caustic(table(), 5, 2));
    }
}
BENCHMARK(BM_FindPeriodicCaustic);

void BM_EvaluateReport(benchmark::State& state) {
    const Orbit o = orbit(table(), launch_tangent(table(), heptagon().mu_star, 0.3), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(o));
    }
}
BENCHMARK(BM_EvaluateReport);

void BM_GridLayer(benchmark::State& state) {
    static const PeriodicCaustic pc13 = find_periodic_caustic(table(), 13, 1);
    const Orbit o = orbit(table(), launch_tangent(table(), pc13.mu_star, 0.37), 13);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_layer(o, 5));
    }
}
BENCHMARK(BM_GridLayer);

void BM_FamilySweep16(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(family_sweep(heptagon(), 16));
    }
}
BENCHMARK(BM_FamilySweep16);

} // namespace

BENCHMARK_MAIN();
