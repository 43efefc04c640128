#include <benchmark/benchmark.h>

#include "fdf/covariance.hpp"
#include "fdf/fit.hpp"
#include "fdf/hypothesis.hpp"
#include "fdf/lambda.hpp"
#include "fdf/sim.hpp"

using namespace fdf;

namespace {

FunctionalSample make_sample(int n, int m) {
    auto [sample, truth] = sim::simulate_model(2, n, m, 42);
    return center(sample);
}

void BM_LagCovKernel(benchmark::State& state) {
    FunctionalSample sample = make_sample(int(state.range(0)), 101);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lag_cov_kernel(sample, 3));
    }
}
BENCHMARK(BM_LagCovKernel)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LongRunKernel(benchmark::State& state) {
    FunctionalSample sample = make_sample(int(state.range(0)), 101);
    double b = select_bandwidth(int(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(longrun_minus_lag0(sample, b));
    }
}
BENCHMARK(BM_LongRunKernel)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BuildLambda(benchmark::State& state) {
    FunctionalSample sample = make_sample(500, 101);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_lambda(sample, 8.0, 6));
    }
}
BENCHMARK(BM_BuildLambda)->Unit(benchmark::kMillisecond);

void BM_FitStationary(benchmark::State& state) {
    auto [sample, truth] = sim::simulate_model(2, int(state.range(0)), 101, 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_stationary(sample));
    }
}
BENCHMARK(BM_FitStationary)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_FitNonstationary(benchmark::State& state) {
    auto [sample, truth] = sim::simulate_model(4, int(state.range(0)), 101, 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_nonstationary(sample));
    }
}
BENCHMARK(BM_FitNonstationary)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_StationarityTest(benchmark::State& state) {
    FunctionalSample noise = sim::gen_bm_noise(500, Grid::uniform(101), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stationarity_test(noise));
    }
}
BENCHMARK(BM_StationarityTest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
