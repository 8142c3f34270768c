#pragma once

// Kernel families f(z, z'), Gram matrices, empirical Mercer feature maps and
// the Riemannian metric H_xi = [d^2 f / dz_i dz'_j] at (xi, xi).

#include "lms/latent.hpp"
#include "lms/types.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace lms::kernels {

/// f(k, l) = F(k, l) on atoms {0, ..., m-1}.
struct DiscreteMatrix {
  Matrix F;
};

/// f(z, z') = exp(-|z - z'|^2 / scale).
struct Rbf {
  double scale = 1.0;
};

/// f(z, z') = (<z, z'> + a)^b.
struct Polynomial {
  double a = 1.0;
  int b = 2;
};

/// f(z, z') = sum_k cos(z_k - z'_k) + offset.
struct CosineSum {
  double offset = 2.0;
};

/// f(z, z') = g(z - z'). `hessian` returns the Hessian of g at a point; only
/// its value at the origin is needed for the metric.
struct TranslationInvariant {
  std::function<double(const Vector&)> g;
  std::function<Matrix(const Vector&)> hessian;
  std::string name = "translation-invariant";
};

/// f(z, z') = g(<z, z'>) with g(x) = sum_n coeffs[n] x^n.
struct InnerProductAnalytic {
  std::vector<double> coeffs;
};

using KernelSpec =
    std::variant<DiscreteMatrix, Rbf, Polynomial, CosineSum, TranslationInvariant, InnerProductAnalytic>;

void validate(const KernelSpec& spec);
std::string describe(const KernelSpec& spec);

/// f(z, z'). For DiscreteMatrix the single coordinate holds the atom index.
/// Exactly symmetric in its arguments.
double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& z,
                   const Eigen::Ref<const Vector>& zp);

/// Gram matrix [f(z_i, z_j)] over the rows of `points`; exactly symmetric.
Matrix gram(const KernelSpec& spec, const Matrix& points);
inline Matrix gram(const KernelSpec& spec, const latent::LatentSample& s) { return gram(spec, s.points); }

/// Cross-Gram [f(a_i, b_j)].
Matrix cross_gram(const KernelSpec& spec, const Matrix& a, const Matrix& b);

/// Number of eigenvalues above rel_tol * lambda_max. Throws InvalidInput when
/// the smallest eigenvalue is below -1e-8 * max(1, lambda_max).
Index numerical_rank(const Matrix& M, double rel_tol = 1e-8);

/// Empirical feature map z -> phi_hat(z) in R^rank with
/// <phi_hat(z), phi_hat(z')> ~= f(z, z').
class FeatureMap {
 public:
  enum class Kind { DiscreteAtoms, Nystrom };

  /// Exact map for a discrete kernel under atom probabilities `probs`:
  /// rows of diag(probs)^(-1/2) U_r Lambda_r^(1/2), where U Lambda U^T is the
  /// eigendecomposition of diag(sqrt probs) F diag(sqrt probs).
  static FeatureMap discrete(const Matrix& F, const std::vector<double>& probs, Index rank);

  /// Nystrom map from an anchor sample of mu: eigendecompose Gram/n at the
  /// anchors and extend by phi_hat(z) = (n Lambda_r)^(-1/2) U_r^T k(z).
  static FeatureMap nystrom(const KernelSpec& spec, const Matrix& anchors, Index rank);

  Kind kind() const { return kind_; }
  Index rank() const { return rank_; }
  /// Mercer eigenvalue estimates (lambda_k^f) in non-increasing order.
  const Vector& eigenvalues() const { return eigenvalues_; }

  Vector map(const Eigen::Ref<const Vector>& z) const;
  /// Applies map() to every row.
  Matrix map_rows(const Matrix& points) const;

  /// Rows are phi_hat of each atom (DiscreteAtoms only).
  const Matrix& atom_vectors() const { return atoms_; }

 private:
  Kind kind_ = Kind::DiscreteAtoms;
  Index rank_ = 0;
  Vector eigenvalues_;
  Matrix atoms_;
  KernelSpec spec_;
  Matrix anchors_;
  Matrix projection_;  // n_anchor x rank, U_r (n Lambda_r)^(-1/2)
};

/// Mercer features for `spec` with support given by a latent sample. For a
/// DiscreteMatrix kernel the sample's space must be Discrete and its probs are
/// used; otherwise the sample serves as Nystrom anchors.
FeatureMap mercer_features(const KernelSpec& spec, const latent::LatentSample& support, Index rank);

struct MetricTensor {
  Vector at;
  Matrix H;
};

/// Analytic H_xi for the differentiable families. Throws InvalidInput for
/// DiscreteMatrix.
MetricTensor riemannian_metric(const KernelSpec& spec, const Vector& xi);

/// Length of the curve phi(eta) computed as the sum over segments of
/// <d eta, H d eta>^(1/2), with H evaluated at segment midpoints.
double curve_length(const KernelSpec& spec, const Matrix& eta);

/// True iff no two rows of F agree within `tol` in the max norm.
bool injectivity_check_discrete(const Matrix& F, double tol);

/// |phi(z) - phi(z')|^2 = f(z, z) + f(z', z') - 2 f(z, z').
double feature_distance_sq(const KernelSpec& spec, const Eigen::Ref<const Vector>& z,
                           const Eigen::Ref<const Vector>& zp);

}  // namespace lms::kernels
