#include "lms/linalg.hpp"

#include "lms/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lms::linalg {

namespace {

void require_finite(const Matrix& A, const char* what) {
  if (!A.allFinite()) {
    throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_symmetric(const Matrix& A, const char* what) {
  if (A.rows() != A.cols()) {
    throw InvalidInput(std::string(what) + ": matrix is not square");
  }
  require_finite(A, what);
  if (asymmetry(A) > tol::kSymmetry) {
    throw InvalidInput(std::string(what) + ": matrix is not symmetric");
  }
}

// Eigen returns ascending eigenvalues; reverse into non-increasing order.
SymEig descending(const Eigen::SelfAdjointEigenSolver<Matrix>& solver, Index r) {
  const Index n = solver.eigenvalues().size();
  SymEig out;
  out.values.resize(r);
  out.vectors.resize(n, r);
  for (Index k = 0; k < r; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  canonicalize_signs(out.vectors);
  return out;
}

}  // namespace

double asymmetry(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  return (A - A.transpose()).cwiseAbs().maxCoeff() / scale;
}

void canonicalize_signs(Matrix& vectors) {
  for (Index k = 0; k < vectors.cols(); ++k) {
    Index arg = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, k) < 0.0) vectors.col(k) *= -1.0;
  }
}

SymEig sym_eig_top(const Matrix& A, Index r) {
  require_symmetric(A, "sym_eig_top");
  const Index n = A.rows();
  if (r < 1 || r > n) {
    throw InvalidInput("sym_eig_top: r=" + std::to_string(r) + " outside [1, " +
                       std::to_string(n) + "]");
  }
  // Householder tridiagonalisation followed by implicit-shift QL/QR.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_eig_top: eigensolver did not converge");
  }
  return descending(solver, r);
}

SymEig sym_eig(const Matrix& A) { return sym_eig_top(A, A.rows()); }

Vector sym_eigenvalues(const Matrix& A) {
  require_symmetric(A, "sym_eigenvalues");
  if (A.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

Svd svd_thin(const Matrix& A) {
  if (A.rows() < 1 || A.cols() < 1) throw InvalidInput("svd_thin: empty matrix");
  require_finite(A, "svd_thin");
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Cholesky cholesky_jitter(const Matrix& A, double jitter) {
  require_symmetric(A, "cholesky_jitter");
  if (jitter < 0.0 || !std::isfinite(jitter)) {
    throw InvalidInput("cholesky_jitter: jitter must be a finite non-negative number");
  }
  const Index n = A.rows();
  if (n == 0) return {Matrix(0, 0), jitter};
  const double mean_diag = A.trace() / static_cast<double>(n);
  const double cap = tol::kJitterCap * std::abs(mean_diag);

  double current = jitter;
  while (true) {
    Matrix shifted = A;
    shifted.diagonal().array() += current;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() == Eigen::Success) {
      return {llt.matrixL(), current};
    }
    const double next = current > 0.0 ? current * 10.0 : 1e-12 * std::abs(mean_diag);
    if (next > cap || next == 0.0) {
      throw NumericalError("cholesky_jitter: matrix is not positive semi-definite within jitter cap");
    }
    current = next;
  }
}

Matrix procrustes(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw InvalidInput("procrustes: shape mismatch");
  }
  const Svd svd = svd_thin(A.transpose() * B);
  return svd.U * svd.V.transpose();
}

Matrix gram_rows(const Matrix& Y, double scale) {
  const Index n = Y.rows();
  Matrix G = Matrix::Zero(n, n);
  G.selfadjointView<Eigen::Lower>().rankUpdate(Y, scale);
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  return G;
}

Matrix pairwise_distances(const Matrix& X) {
  const Index n = X.rows();
  Matrix D = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = (X.row(i) - X.row(j)).norm();
      D(i, j) = d;
      D(j, i) = d;
    }
  }
  return D;
}

}  // namespace lms::linalg
