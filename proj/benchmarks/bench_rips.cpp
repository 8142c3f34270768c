#include "lms/latent.hpp"
#include "lms/rips.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_RipsTorus(benchmark::State& state) {
  const auto Z = lms::latent::sample(lms::latent::TorusR3{0.36, 0.18}, state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(lms::rips::rips_persistence(Z.points, 1.5, 1));
}
BENCHMARK(BM_RipsTorus)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_RipsDim0(benchmark::State& state) {
  const auto Z = lms::latent::sample(lms::latent::Sphere{3}, state.range(0), 6);
  for (auto _ : state) benchmark::DoNotOptimize(lms::rips::rips_persistence(Z.points, 2.0, 0));
}
BENCHMARK(BM_RipsDim0)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
