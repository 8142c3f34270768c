#include "lms/dimselect.hpp"

#include "lms/linalg.hpp"
#include "lms/parallel.hpp"
#include "lms/random.hpp"
#include "lms/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lms::dimselect {

namespace {

constexpr std::uint64_t kShuffleStream = 0x53504C54;  // "SPLT"

Matrix shuffled_rows(const Matrix& Y, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(Y.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  Philox4x32 rng(seed, kShuffleStream);
  std::shuffle(order.begin(), order.end(), rng);
  Matrix out(Y.rows(), Y.cols());
  for (Index i = 0; i < Y.rows(); ++i) out.row(i) = Y.row(order[i]);
  return out;
}

void sqrt_clamped(Matrix& squared) {
  squared = squared.cwiseMax(0.0).cwiseSqrt();
}

}  // namespace

Index default_r_max(Index n, Index p) {
  return std::min<Index>({50, (n + 1) / 2, p});
}

double split_half_distance(const Matrix& Y1, const Matrix& Y2, Index r) {
  // V from the p x p matrix directly; used only at test scale.
  const auto eig = linalg::sym_eig_top(Y1.transpose() * Y1, r);
  const Matrix X1 = Y1 * eig.vectors * eig.vectors.transpose();
  return transport::uniform_transport_cost(transport::euclidean_cost(X1, Y2));
}

DimSelectReport wasserstein_dimension_select(const Matrix& Y_in, Index r_max, const SplitOptions& options) {
  const Index n = Y_in.rows(), p = Y_in.cols();
  if (n < 4) throw InvalidInput("wasserstein_dimension_select: need at least 4 rows");
  const Index n1 = (n + 1) / 2, n2 = n - n1;
  if (r_max < 1 || r_max > std::min(n1, p)) {
    throw InvalidInput("wasserstein_dimension_select: r_max out of range [1, min(ceil(n/2), p)]");
  }
  if (!Y_in.allFinite()) throw InvalidInput("wasserstein_dimension_select: non-finite data");

  const Matrix Y = options.shuffle ? shuffled_rows(Y_in, options.seed) : Y_in;
  const Matrix Y1 = Y.topRows(n1);
  const Matrix Y2 = Y.bottomRows(n2);

  // Gram route for V^(1): Y1 Y1^T = U L U^T, V = Y1^T U L^{-1/2}, so
  // S1 = Y1 V = U L^{1/2} and T2 = Y2 V = Y2 Y1^T U L^{-1/2}.
  const auto eig = linalg::sym_eig_top(linalg::gram_rows(Y1, 1.0), r_max);
  const double top = std::max(eig.values(0), 0.0);
  Index usable = 0;
  while (usable < r_max && eig.values(usable) > 1e-12 * top && top > 0.0) ++usable;

  Matrix S1 = Matrix::Zero(n1, r_max);
  Matrix T2 = Matrix::Zero(n2, r_max);
  if (usable > 0) {
    const Matrix U = eig.vectors.leftCols(usable);
    const Vector lam = eig.values.head(usable);
    S1.leftCols(usable) = U * lam.cwiseSqrt().asDiagonal();
    T2.leftCols(usable) = (Y2 * (Y1.transpose() * U)) * lam.cwiseSqrt().cwiseInverse().asDiagonal();
  }
  const Vector y2_sq = Y2.rowwise().squaredNorm();

  // cost_r(i, j)^2 = |S1_i|^2 + |y2_j|^2 - 2 S1_i . T2_j restricted to r columns.
  std::vector<Matrix> costs(static_cast<std::size_t>(r_max));
  {
    Matrix cross = Matrix::Zero(n1, n2);
    Vector s_sq = Vector::Zero(n1);
    for (Index r = 1; r <= r_max; ++r) {
      const Index c = r - 1;
      cross.noalias() += S1.col(c) * T2.col(c).transpose();
      s_sq += S1.col(c).cwiseAbs2();
      Matrix sq = (-2.0 * cross).colwise() + s_sq;
      sq.rowwise() += y2_sq.transpose();
      sqrt_clamped(sq);
      costs[static_cast<std::size_t>(c)] = std::move(sq);
    }
  }

  DimSelectReport report;
  report.method = Method::Wasserstein;
  report.curve.resize(static_cast<std::size_t>(r_max));
  parallel_for(static_cast<std::size_t>(r_max), [&](std::size_t c) {
    report.curve[c] = {static_cast<Index>(c) + 1, transport::uniform_transport_cost(costs[c])};
  });
  Index best = 0;
  for (Index c = 1; c < r_max; ++c) {
    if (report.curve[c].d < report.curve[best].d) best = c;
  }
  report.selected = best + 1;
  report.r_grid.resize(static_cast<std::size_t>(r_max));
  std::iota(report.r_grid.begin(), report.r_grid.end(), Index{1});
  return report;
}

ElbowResult elbow_select(const std::vector<double>& eigenvalues) {
  const std::size_t k = eigenvalues.size();
  if (k < 2) throw InvalidInput("elbow_select: need at least 2 eigenvalues");
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(eigenvalues[i])) throw InvalidInput("elbow_select: non-finite eigenvalue");
    if (i > 0 && eigenvalues[i] > eigenvalues[i - 1]) {
      throw InvalidInput("elbow_select: eigenvalues must be non-increasing");
    }
  }
  if (eigenvalues.front() == eigenvalues.back()) return {1, true};

  // Prefix sums of x and x^2 give each segment's SS in O(1).
  std::vector<long double> s(k + 1, 0.0L), s2(k + 1, 0.0L);
  for (std::size_t i = 0; i < k; ++i) {
    s[i + 1] = s[i] + eigenvalues[i];
    s2[i + 1] = s2[i] + static_cast<long double>(eigenvalues[i]) * eigenvalues[i];
  }
  auto segment_ss = [&](std::size_t lo, std::size_t hi) {
    const long double m = static_cast<long double>(hi - lo);
    const long double sum = s[hi] - s[lo];
    return std::max(0.0L, (s2[hi] - s2[lo]) - sum * sum / m);
  };
  std::size_t best = 1;
  long double best_ss = segment_ss(0, 1) + segment_ss(1, k);
  for (std::size_t q = 2; q < k; ++q) {
    const long double ss = segment_ss(0, q) + segment_ss(q, k);
    // Relative slack keeps the scale-invariant answer stable under rounding.
    if (ss < best_ss * (1.0L - 1e-12L)) {
      best_ss = ss;
      best = q;
    }
  }
  return {static_cast<Index>(best), false};
}

DimSelectReport elbow_report(const std::vector<double>& eigenvalues) {
  const auto result = elbow_select(eigenvalues);
  DimSelectReport report;
  report.method = Method::Elbow;
  report.selected = result.dimension;
  report.degenerate = result.degenerate;
  // Curve holds the pooled within-segment SS per split, minimized at the pick.
  const std::size_t k = eigenvalues.size();
  for (std::size_t q = 1; q < k; ++q) {
    double ss = 0.0;
    for (auto [lo, hi] : {std::pair{std::size_t{0}, q}, std::pair{q, k}}) {
      double mean = 0.0;
      for (std::size_t i = lo; i < hi; ++i) mean += eigenvalues[i];
      mean /= static_cast<double>(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) ss += (eigenvalues[i] - mean) * (eigenvalues[i] - mean);
    }
    report.curve.push_back({static_cast<Index>(q), ss});
    report.r_grid.push_back(static_cast<Index>(q));
  }
  return report;
}

}  // namespace lms::dimselect
