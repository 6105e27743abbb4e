#include "qhe/closed_form.hpp"
#include "qhe/floquet.hpp"
#include "qhe/observables.hpp"

#include <benchmark/benchmark.h>

using namespace qhe;

static void BM_FloquetSolve(benchmark::State& state) {
    const EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    const FloquetOptions opt{.harmonics = static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(solve_floquet(p, opt));
}
BENCHMARK(BM_FloquetSolve)->Arg(1)->Arg(2)->Arg(4);

static void BM_ProbeSplitBranch(benchmark::State& state) {
    const EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    for (auto _ : state) benchmark::DoNotOptimize(probe_split_branch(p, +1));
}
BENCHMARK(BM_ProbeSplitBranch);

static void BM_ClosedFormHarmonics(benchmark::State& state) {
    const EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    for (auto _ : state) benchmark::DoNotOptimize(coherence_harmonics(p));
}
BENCHMARK(BM_ClosedFormHarmonics);

static void BM_Sweep(benchmark::State& state) {
    const EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    const GridSpec grid{-50.0, 50.0, 2001};
    const SweepOptions opt{.method = state.range(0) ? Method::Floquet : Method::ClosedForm};
    for (auto _ : state) benchmark::DoNotOptimize(sweep_spectrum(p, grid, opt));
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
