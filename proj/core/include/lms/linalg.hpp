#pragma once

// Dense symmetric eigendecomposition, thin SVD, jittered Cholesky and
// orthogonal Procrustes. Everything here is a pure function of its inputs.

#include "lms/types.hpp"

namespace lms::linalg {

/// Top eigenpairs of a symmetric matrix.
///
/// `values` are non-increasing; column k of `vectors` is the unit eigenvector
/// for values[k], signed so that its largest-magnitude entry is positive.
/// Tied eigenvalues keep the solver's order; only the spanned eigenspace is
/// meaningful in that case.
struct SymEig {
  Vector values;
  Matrix vectors;
};

struct Svd {
  Matrix U;  // m x k, k = min(m, n)
  Vector S;  // non-increasing, non-negative
  Matrix V;  // n x k
};

struct Cholesky {
  Matrix lower;         // L with L L^T = A + jitter I
  double jitter = 0.0;  // jitter actually applied after escalation
};

/// Max |A - A^T| / max(1, |A|_max).
double asymmetry(const Matrix& A);

/// Returns the r largest eigenpairs of the symmetric matrix A.
/// Throws InvalidInput when A is not square/symmetric or r is outside [1, n],
/// NumericalError when the QL iteration fails to converge.
SymEig sym_eig_top(const Matrix& A, Index r);

/// Full spectrum, same conventions as sym_eig_top.
SymEig sym_eig(const Matrix& A);

/// Eigenvalues only, non-increasing.
Vector sym_eigenvalues(const Matrix& A);

/// Thin SVD with A = U diag(S) V^T.
Svd svd_thin(const Matrix& A);

/// Cholesky factor of A + jitter I. On failure the jitter is escalated by a
/// factor 10 (starting from 1e-12 * mean diagonal when jitter is zero) until
/// it would exceed 1e-4 * trace(A) / n, at which point NumericalError is thrown.
Cholesky cholesky_jitter(const Matrix& A, double jitter);

/// Orthogonal Q (r x r) minimising |A Q - B|_F, built as F1 F2^T from the
/// SVD F1 S F2^T of A^T B.
Matrix procrustes(const Matrix& A, const Matrix& B);

/// Y Y^T * scale, assembled so the result is exactly symmetric.
Matrix gram_rows(const Matrix& Y, double scale = 1.0);

/// Dense Euclidean distance matrix between the rows of X, exactly symmetric
/// with a zero diagonal.
Matrix pairwise_distances(const Matrix& X);

/// Flip column signs so that each column's largest-magnitude entry is positive.
void canonicalize_signs(Matrix& vectors);

}  // namespace lms::linalg
