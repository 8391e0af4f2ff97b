#include <benchmark/benchmark.h>

#include "spathermo/spathermo.hpp"

using namespace spathermo;

namespace {

const EnergySpectrum& spectrum8() {
    static const EnergySpectrum eps({0.0, 0.31, 0.55, 0.9, 1.2, 1.44, 1.78, 2.0});
    return eps;
}

void BM_renyi(benchmark::State& state) {
    const Distribution p = Distribution::normalized({5, 4, 3.5, 3, 2.5, 2, 1.5, 1});
    const double alpha = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(renyi(p, alpha));
}
BENCHMARK(BM_renyi)->Arg(5)->Arg(10)->Arg(20);

void BM_escort(benchmark::State& state) {
    const Distribution p = Distribution::normalized({5, 4, 3.5, 3, 2.5, 2, 1.5, 1});
    for (auto _ : state) benchmark::DoNotOptimize(escort(p, 2.0));
}
BENCHMARK(BM_escort);

void BM_solve_linear(benchmark::State& state) {
    const double alpha = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_linear_renyi(spectrum8(), 0.8, alpha));
}
BENCHMARK(BM_solve_linear)->Arg(5)->Arg(10)->Arg(20)->Arg(30);

void BM_solve_escort(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_escort_renyi(spectrum8(), 0.8, 2.0));
}
BENCHMARK(BM_solve_escort);

void BM_potentials(benchmark::State& state) {
    const EntropySpec spec(2.0, make_hq(0.7));
    const MaxEntSolution sol = solve_spa(spectrum8(), 0.8, spec, ConstraintKind::Linear);
    for (auto _ : state) benchmark::DoNotOptimize(potentials(sol, spec));
}
BENCHMARK(BM_potentials);

void BM_verify_diagram(benchmark::State& state) {
    const MapPtr map = make_hq(0.7);
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_diagram(spectrum8(), 0.8, 2.0, map));
}
BENCHMARK(BM_verify_diagram);

void BM_oracle(benchmark::State& state) {
    const EnergySpectrum eps({0.0, 0.5, 1.1, 2.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_oracle(eps, 0.8, 2.0, ConstraintKind::Linear));
}
BENCHMARK(BM_oracle);

} // namespace

BENCHMARK_MAIN();
