#include "debtrun/discrete_tenor.hpp"
#include "debtrun/fd_engine.hpp"
#include "debtrun/greens.hpp"
#include "debtrun/staggered_tenor.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace debtrun;

static void BM_ThomasSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> diag(n, 4.0), rhs(n, 1.0), out(n), scratch(n);
    for (auto _ : state) {
        thomas_solve(-1.0, diag, -1.0, rhs, out, scratch);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ThomasSolve)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

static void BM_DiscreteSolve(benchmark::State& state) {
    ModelParams p;
    const DiscreteTenor tenor = DiscreteTenor::equally_spaced(4, p.horizon);
    const Grid grid{6.0, static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_discrete_value(p, BeliefSpec::uniform(), tenor, grid));
    }
}
BENCHMARK(BM_DiscreteSolve)->Args({200, 500})->Args({800, 2000})->Unit(benchmark::kMillisecond);

static void BM_StaggeredSolve(benchmark::State& state) {
    ModelParams p;
    const Grid grid{6.0, static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
    const IntensitySpec g = IntensitySpec::constant(0.4);
    SolveStats stats;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_staggered_value(p, BeliefSpec::uniform(), g, grid, {}, &stats));
    }
    state.counters["max_newton"] = stats.max_iterations;
}
BENCHMARK(BM_StaggeredSolve)->Args({200, 500})->Args({800, 2000})->Unit(benchmark::kMillisecond);

static void BM_GreensValue(benchmark::State& state) {
    ModelParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(greens_final_interval_value(p, 8.0, 8.5, 3.0));
    }
}
BENCHMARK(BM_GreensValue)->Unit(benchmark::kMicrosecond);
