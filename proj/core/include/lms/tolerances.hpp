#pragma once

// Numerical tolerances shared across modules. Tests assert against the same
// constants so a change here is visible everywhere it matters.

namespace lms::tol {

// Max |A - A^T| (relative to max(1, |A|_max)) accepted as "symmetric".
inline constexpr double kSymmetry = 1e-12;
// Eigen-residual bound: |A v - lambda v| <= kEigResidual * |A|_2.
inline constexpr double kEigResidual = 1e-9;
// Orthonormality of returned eigenvector columns.
inline constexpr double kOrthonormal = 1e-10;
// Relative SVD reconstruction bound.
inline constexpr double kSvdResidual = 1e-9;
// Smallest eigenvalue (relative to max(1, lambda_max)) tolerated for a PSD matrix.
inline constexpr double kPsdSlack = 1e-8;
// Relative eigenvalue threshold separating signal from round-off in rank decisions.
inline constexpr double kNumericalRank = 1e-8;
// Jitter cap for Cholesky escalation, as a multiple of trace(A)/n.
inline constexpr double kJitterCap = 1e-4;
// Default Gaussian-process sampling jitter, as a multiple of the mean diagonal.
inline constexpr double kGpJitter = 1e-8;
// Weights must sum to one within this bound.
inline constexpr double kSimplex = 1e-12;

}  // namespace lms::tol
