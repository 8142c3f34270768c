#include "lms/embed.hpp"

#include "lms/linalg.hpp"
#include "lms/tolerances.hpp"

#include <cmath>
#include <string>

namespace lms::embed {

namespace {

void check_rank_request(const Matrix& Y, Index r) {
  const Index limit = std::min(Y.rows(), Y.cols());
  if (r < 1 || r > limit) {
    throw InvalidInput("pc_scores: r=" + std::to_string(r) + " outside [1, " + std::to_string(limit) + "]");
  }
}

Index count_rank(const Vector& values) {
  if (values.size() == 0 || values(0) <= 0.0) return 0;
  return (values.array() > tol::kNumericalRank * values(0)).count();
}

}  // namespace

Matrix Embedding::scaled_scores() const { return scores / std::sqrt(static_cast<double>(p)); }

Matrix center_rows(const Matrix& Y) { return Y.rowwise() - Y.colwise().mean(); }

Matrix gram_route_scores(const Matrix& Y, Index r) {
  check_rank_request(Y, r);
  const auto eig = linalg::sym_eig_top(linalg::gram_rows(Y, 1.0 / static_cast<double>(Y.cols())), r);
  return eig.vectors * eig.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Matrix covariance_route_scores(const Matrix& Y, Index r) {
  check_rank_request(Y, r);
  const auto eig = linalg::sym_eig_top(linalg::gram_rows(Y.transpose()), r);
  return Y * eig.vectors;
}

Embedding pc_scores(const Matrix& Y_in, Index r, bool centered) {
  check_rank_request(Y_in, r);
  if (!Y_in.allFinite()) throw InvalidInput("pc_scores: data has non-finite entries");
  const Matrix Y = centered ? center_rows(Y_in) : Y_in;
  const Index n = Y.rows(), p = Y.cols();
  const double np = static_cast<double>(n) * static_cast<double>(p);

  Embedding out;
  out.centered = centered;
  out.r = r;
  out.p = p;
  Vector spectrum;  // eigenvalues of p^{-1} Y Y^T (equivalently of p^{-1} Y^T Y)
  if (n <= p) {
    const auto eig = linalg::sym_eig_top(linalg::gram_rows(Y, 1.0 / static_cast<double>(p)), r);
    spectrum = eig.values.cwiseMax(0.0);
    // Y V_Y = sqrt(p) U_Y Lambda_Y^{1/2}.
    out.scores = std::sqrt(static_cast<double>(p)) * eig.vectors * spectrum.cwiseSqrt().asDiagonal();
  } else {
    const auto eig = linalg::sym_eig_top(linalg::gram_rows(Y.transpose()), r);
    spectrum = eig.values.cwiseMax(0.0) / static_cast<double>(p);
    out.scores = Y * eig.vectors;
  }
  out.eigenvalues = spectrum * static_cast<double>(p) / np;
  out.numerical_rank = count_rank(spectrum);
  if (out.numerical_rank == 0) throw NumericalError("pc_scores: data matrix has rank zero");
  if (out.numerical_rank < r) {
    // Directions beyond the rank carry only round-off.
    out.scores.rightCols(r - out.numerical_rank).setZero();
  }
  return out;
}

Vector scree(const Matrix& Y, Index k) {
  const Index n = Y.rows(), p = Y.cols();
  const double np = static_cast<double>(n) * static_cast<double>(p);
  const Index limit = std::min(n, p);
  if (k < 1 || k > limit) throw InvalidInput("scree: k out of range");
  const Vector ev = n <= p ? linalg::sym_eigenvalues(linalg::gram_rows(Y))
                           : linalg::sym_eigenvalues(linalg::gram_rows(Y.transpose()));
  return ev.head(k).cwiseMax(0.0) / np;
}

double pairwise_discrepancy(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("pairwise_discrepancy: row mismatch");
  double worst = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = i + 1; j < a.rows(); ++j) {
      const double da = (a.row(i) - a.row(j)).norm();
      const double db = (b.row(i) - b.row(j)).norm();
      worst = std::max(worst, std::abs(da - db));
    }
  }
  return worst;
}

AlignmentReport align(const Embedding& embedding, const Matrix& targets) {
  const Matrix scaled = embedding.scaled_scores();
  if (scaled.rows() != targets.rows() || scaled.cols() != targets.cols()) {
    throw InvalidInput("align: scores and targets differ in shape");
  }
  AlignmentReport report;
  report.Q = linalg::procrustes(scaled, targets);
  const Matrix residual = scaled * report.Q - targets;
  report.uniform_error = residual.rowwise().norm().maxCoeff();
  report.pairwise_error = pairwise_discrepancy(scaled, targets);
  return report;
}

double centered_kernel(const kernels::KernelSpec& kernel, const latent::LatentSample& Z,
                       const Eigen::Ref<const Vector>& z, const Eigen::Ref<const Vector>& zp) {
  const Index n = Z.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double mean_z = 0.0, mean_zp = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Vector zi = Z.points.row(i).transpose();
    mean_z += kernels::kernel_eval(kernel, zi, z);
    mean_zp += kernels::kernel_eval(kernel, zi, zp);
  }
  const double grand = kernels::gram(kernel, Z.points).sum();
  return kernels::kernel_eval(kernel, z, zp) - inv_n * mean_z - inv_n * mean_zp + inv_n * inv_n * grand;
}

Matrix centered_kernel_matrix(const kernels::KernelSpec& kernel, const latent::LatentSample& Z) {
  const Matrix K = kernels::gram(kernel, Z.points);
  const Index n = K.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Vector row_means = K.rowwise().sum() * inv_n;
  const double grand = K.sum() * inv_n * inv_n;
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out(i, j) = K(i, j) - row_means(i) - row_means(j) + grand;
  }
  return out;
}

Matrix double_center(const Matrix& K) {
  const Index n = K.rows();
  const Matrix C = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  return C * K * C;
}

}  // namespace lms::embed
