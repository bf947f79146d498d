// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare
// thread counts; the serial variants ignore it.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "bayesctl/gain_search.hpp"
#include "bayesctl/mc_oracle.hpp"
#include "bayesctl/posterior_laplace.hpp"
#include "bayesctl/pushforward.hpp"
#include "bayesctl/serial.hpp"

using namespace bayesctl;

namespace {

const CostSpec kHighQCost{100.0, 1.0, INFINITY};
const PlantPrior kWidePrior = PlantPrior::gaussian(5.0, 5.0);
const CostSpec kUnitT3{1.0, 1.0, 3.0};
const MeasurementNoise kNoise{0.1};
const PlantPrior kTruncPrior = PlantPrior::truncated(3.0, 2.0, 0.0, 6.0);

std::vector<double> axis(int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(1.5 * i / (n - 1));
    return v;
}

SimConfig sim_config(std::int64_t paths) {
    SimConfig cfg;
    cfg.n_paths = paths;
    cfg.dt = 1e-2;
    return cfg;
}

void BM_GainDensity_Serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(serial::sample_gain_density(kWidePrior, kHighQCost, n));
}
void BM_GainDensity_Parallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_gain_density(kWidePrior, kHighQCost, n));
}

void BM_Sweep_Serial(benchmark::State& state) {
    const auto g = axis(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::sweep(g, g, PlantPrior::gaussian(3.0, 0.0), kUnitT3, SearchConfig{}));
}
void BM_Sweep_Parallel(benchmark::State& state) {
    const auto g = axis(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep(g, g, PlantPrior::gaussian(3.0, 0.0), kUnitT3, SearchConfig{}));
}

void BM_EstimateCost_Serial(benchmark::State& state) {
    const SimConfig cfg = sim_config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(serial::estimate_cost(3.0, -6.1623, kUnitT3, kNoise, cfg));
}
void BM_EstimateCost_Parallel(benchmark::State& state) {
    const SimConfig cfg = sim_config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_cost(3.0, -6.1623, kUnitT3, kNoise, cfg));
}

void BM_Induced_Serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SearchConfig cfg = default_per_p_search_config(kTruncPrior);
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::induced_gain_distribution(kTruncPrior, kUnitT3, kNoise, n, cfg));
}
void BM_Induced_Parallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SearchConfig cfg = default_per_p_search_config(kTruncPrior);
    for (auto _ : state) benchmark::DoNotOptimize(induced_gain_distribution(kTruncPrior, kUnitT3, kNoise, n, cfg));
}

} // namespace

BENCHMARK(BM_GainDensity_Serial)->Arg(1001)->Arg(100001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GainDensity_Parallel)->Arg(1001)->Arg(100001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep_Serial)->Arg(6)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep_Parallel)->Arg(6)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateCost_Serial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateCost_Parallel)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Induced_Serial)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Induced_Parallel)->Arg(401)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
