#include "debtrun/montecarlo.hpp"
#include "debtrun/risk_metrics.hpp"

#include <benchmark/benchmark.h>

using namespace debtrun;

static void BM_CoxPath(benchmark::State& state) {
    ModelParams p;
    const IntensitySpec g = IntensitySpec::constant(0.4);
    std::uint64_t i = 0;
    for (auto _ : state) {
        PathRng rng(1, i++);
        benchmark::DoNotOptimize(simulate_path(p, g, 8.0, 0.01, rng));
    }
}
BENCHMARK(BM_CoxPath)->Unit(benchmark::kMicrosecond);

static void BM_FirstPassage(benchmark::State& state) {
    ModelParams p;
    McOptions mc;
    mc.n_paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_first_passage_pd(p, 4.0, p.horizon, mc));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FirstPassage)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
