#include "lms/random.hpp"
#include "lms/transport.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_NetworkSimplexUniform(benchmark::State& state) {
  const auto k = state.range(0);
  lms::Philox4x32 rng(3, 0);
  lms::Matrix a(k, 10), b(k, 10);
  lms::fill_standard_normal(a.reshaped(), rng);
  lms::fill_standard_normal(b.reshaped(), rng);
  const auto ca = lms::transport::WeightedCloud::uniform(a), cb = lms::transport::WeightedCloud::uniform(b);
  for (auto _ : state) benchmark::DoNotOptimize(lms::transport::wasserstein1(ca, cb).cost);
}
BENCHMARK(BM_NetworkSimplexUniform)->Arg(50)->Arg(125)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_BottleneckFeasible(benchmark::State& state) {
  const auto k = state.range(0);
  lms::Philox4x32 rng(4, 0);
  lms::Matrix c(k, k);
  lms::fill_standard_normal(c.reshaped(), rng);
  c = c.cwiseAbs();
  for (auto _ : state) benchmark::DoNotOptimize(lms::transport::bottleneck_feasible(c, 1.0));
}
BENCHMARK(BM_BottleneckFeasible)->Arg(100)->Arg(400);

}  // namespace
