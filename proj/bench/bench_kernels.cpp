#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "deltaq/montecarlo.hpp"
#include "deltaq/stats.hpp"

using namespace deltaq;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_BusyPeriods(benchmark::State& state) {
    QueueConfig c;
    c.n = 10000;
    c.alpha = 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(busy_period_replications(c, 200, 1, mode(state)));
    label(state);
}

void BM_BusyPeriodsStepwise(benchmark::State& state) {
    QueueConfig c;
    c.n = 100;
    c.alpha = 0.5;
    for (auto _ : state)
        benchmark::DoNotOptimize(busy_period_replications(c, 2000, 1, mode(state), BusyPeriodMethod::stepwise));
    label(state);
}

void BM_HittingTimes(benchmark::State& state) {
    DiffusionParams p;
    p.sigma = std::sqrt(2.0);
    HittingOptions o;
    o.dt = 1e-3;
    for (auto _ : state) benchmark::DoNotOptimize(hitting_time_replications(p, o, 2000, 1, mode(state)));
    label(state);
}

void BM_PathMeans(benchmark::State& state) {
    QueueConfig c;
    c.n = 2000;
    const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
    for (auto _ : state) benchmark::DoNotOptimize(rescaled_path_means(c, grid, 40, 1, mode(state)));
    label(state);
}

void BM_Kde(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> x(100000);
    for (auto& v : x) v = e(rng);
    std::vector<double> grid(400);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 0.015 * static_cast<double>(i);
    for (auto _ : state) benchmark::DoNotOptimize(kde_gaussian(x, std::nullopt, grid, mode(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_BusyPeriods)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BusyPeriodsStepwise)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HittingTimes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PathMeans)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Kde)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
