#pragma once

// Principal component scores, their Procrustes alignment to feature-map
// targets, and the double-centred kernel.

#include "lms/kernels.hpp"
#include "lms/latent.hpp"
#include "lms/types.hpp"

namespace lms::embed {

struct Embedding {
  Matrix scores;       // n x r, row i is zeta_i = (Y V_Y)_i
  Vector eigenvalues;  // top-r eigenvalues of (np)^{-1} Y^T Y
  bool centered = false;
  Index r = 0;
  Index p = 0;              // ambient dimension of the data
  Index numerical_rank = 0; // rank of Y at the kNumericalRank threshold, capped at r
  bool rank_deficient() const { return numerical_rank < r; }

  /// p^{-1/2} zeta_i, the scale on which scores approximate phi(Z_i).
  Matrix scaled_scores() const;
};

/// Dimension-r PC scores of Y (uncentered unless `centered`). Routes through
/// the smaller of the n x n and p x p Gram matrices. Throws InvalidInput for r
/// outside [1, min(n, p)] and NumericalError when Y has rank zero.
Embedding pc_scores(const Matrix& Y, Index r, bool centered = false);

/// Gram route: U_Y Lambda_Y^{1/2} from p^{-1} Y Y^T (the n x r matrix equal to
/// p^{-1/2} Y V_Y up to column signs).
Matrix gram_route_scores(const Matrix& Y, Index r);

/// Covariance route: Y V_Y with V_Y the top-r eigenvectors of Y^T Y.
Matrix covariance_route_scores(const Matrix& Y, Index r);

/// Y minus the sample mean row.
Matrix center_rows(const Matrix& Y);

/// Top-k eigenvalues of (np)^{-1} Y^T Y (the scree values).
Vector scree(const Matrix& Y, Index k);

struct AlignmentReport {
  Matrix Q;                    // r x r orthogonal
  double uniform_error = 0.0;  // max_i |p^{-1/2} zeta_i Q - phi(Z_i)|
  double pairwise_error = 0.0; // max_ij | p^{-1/2}|zeta_i - zeta_j| - |phi_i - phi_j| |
};

/// Procrustes-aligns p^{-1/2} scores to `targets` (n x r) and reports the
/// uniform and pairwise errors.
AlignmentReport align(const Embedding& embedding, const Matrix& targets);

/// Pairwise-distance discrepancy between two point clouds with matching rows.
double pairwise_discrepancy(const Matrix& a, const Matrix& b);

/// f~(z, z'; Z) = f(z, z') - mean_i f(Z_i, z) - mean_i f(Z_i, z') + mean_ij f(Z_i, Z_j).
double centered_kernel(const kernels::KernelSpec& kernel, const latent::LatentSample& Z,
                       const Eigen::Ref<const Vector>& z, const Eigen::Ref<const Vector>& zp);

/// [f~(Z_i, Z_j; Z)] evaluated term by term.
Matrix centered_kernel_matrix(const kernels::KernelSpec& kernel, const latent::LatentSample& Z);

/// C_n K C_n with C_n = I - J_n / n.
Matrix double_center(const Matrix& K);

}  // namespace lms::embed
