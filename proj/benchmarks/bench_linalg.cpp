#include "lms/embed.hpp"
#include "lms/linalg.hpp"
#include "lms/random.hpp"

#include <benchmark/benchmark.h>

namespace {

lms::Matrix normal_matrix(lms::Index rows, lms::Index cols, std::uint64_t seed) {
  lms::Philox4x32 rng(seed, 0);
  lms::Matrix A(rows, cols);
  lms::fill_standard_normal(A.reshaped(), rng);
  return A;
}

void BM_SymEigTop(benchmark::State& state) {
  const auto n = state.range(0);
  const lms::Matrix Y = normal_matrix(n, 2 * n, 1);
  const lms::Matrix G = Y * Y.transpose();
  for (auto _ : state) benchmark::DoNotOptimize(lms::linalg::sym_eig_top(G, 20));
}
BENCHMARK(BM_SymEigTop)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

// Gram route on a wide matrix: n x n eigenproblem instead of p x p.
void BM_PcScores(benchmark::State& state) {
  const lms::Matrix Y = normal_matrix(state.range(0), state.range(1), 2);
  for (auto _ : state) benchmark::DoNotOptimize(lms::embed::pc_scores(Y, 20));
}
BENCHMARK(BM_PcScores)->Args({200, 1000})->Args({500, 5000})->Unit(benchmark::kMillisecond);

}  // namespace
