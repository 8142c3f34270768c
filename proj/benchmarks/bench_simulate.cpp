#include "lms/experiments.hpp"
#include "lms/simulate.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_SimulateTorusRbf(benchmark::State& state) {
  const auto cfg = lms::experiments::torus_config(state.range(0), state.range(1), 1.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(lms::sim::simulate(cfg).Y.data());
}
BENCHMARK(BM_SimulateTorusRbf)->Args({400, 500})->Args({1000, 500})->Unit(benchmark::kMillisecond);

void BM_SimulateMixture(benchmark::State& state) {
  const auto cfg = lms::experiments::mixture3_config(state.range(0), state.range(1), 8);
  for (auto _ : state) benchmark::DoNotOptimize(lms::sim::simulate(cfg).Y.data());
}
BENCHMARK(BM_SimulateMixture)->Args({200, 5000})->Args({2000, 200})->Unit(benchmark::kMillisecond);

}  // namespace
