#include "lms/kernels.hpp"

#include "lms/linalg.hpp"
#include "lms/tolerances.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace lms::kernels {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int atom_index(double coordinate, Index m) {
  const double r = std::round(coordinate);
  if (r != coordinate || r < 0.0 || r >= static_cast<double>(m)) {
    throw InvalidInput("DiscreteMatrix kernel: atom index out of range");
  }
  return static_cast<int>(r);
}

// g(x), g'(x), g''(x) for a power series.
std::array<double, 3> series(const std::vector<double>& c, double x) {
  double g = 0.0, g1 = 0.0, g2 = 0.0;
  for (std::size_t n = c.size(); n-- > 0;) {
    g2 = g2 * x + 2.0 * g1;
    g1 = g1 * x + g;
    g = g * x + c[n];
  }
  return {g, g1, g2};
}

}  // namespace

void validate(const KernelSpec& spec) {
  std::visit(
      overloaded{
          [](const DiscreteMatrix& k) {
            if (k.F.rows() == 0 || k.F.rows() != k.F.cols()) {
              throw InvalidInput("DiscreteMatrix: F must be square and non-empty");
            }
            if (linalg::asymmetry(k.F) > tol::kSymmetry) {
              throw InvalidInput("DiscreteMatrix: F must be symmetric");
            }
            if (linalg::sym_eigenvalues(k.F).minCoeff() < -1e-10) {
              throw InvalidInput("DiscreteMatrix: F must be positive semi-definite");
            }
          },
          [](const Rbf& k) {
            if (!(k.scale > 0.0)) throw InvalidInput("Rbf: scale must be positive");
          },
          [](const Polynomial& k) {
            if (!(k.a >= 0.0) || k.b < 1) throw InvalidInput("Polynomial: need a >= 0 and b >= 1");
          },
          [](const CosineSum& k) {
            if (!(k.offset >= 0.0)) throw InvalidInput("CosineSum: offset must be >= 0");
          },
          [](const TranslationInvariant& k) {
            if (!k.g || !k.hessian) throw InvalidInput("TranslationInvariant: g and hessian required");
          },
          [](const InnerProductAnalytic& k) {
            if (k.coeffs.empty()) throw InvalidInput("InnerProductAnalytic: empty series");
            for (double c : k.coeffs) {
              if (!(c >= 0.0)) throw InvalidInput("InnerProductAnalytic: coefficients must be >= 0");
            }
          }},
      spec);
}

std::string describe(const KernelSpec& spec) {
  std::ostringstream os;
  std::visit(overloaded{[&](const DiscreteMatrix& k) { os << "discrete(m=" << k.F.rows() << ")"; },
                        [&](const Rbf& k) { os << "rbf(scale=" << k.scale << ")"; },
                        [&](const Polynomial& k) { os << "polynomial(a=" << k.a << ", b=" << k.b << ")"; },
                        [&](const CosineSum& k) { os << "cosine(offset=" << k.offset << ")"; },
                        [&](const TranslationInvariant& k) { os << k.name; },
                        [&](const InnerProductAnalytic& k) {
                          os << "inner-product(terms=" << k.coeffs.size() << ")";
                        }},
             spec);
  return os.str();
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& z,
                   const Eigen::Ref<const Vector>& zp) {
  if (z.size() != zp.size()) throw InvalidInput("kernel_eval: dimension mismatch");
  return std::visit(
      overloaded{
          [&](const DiscreteMatrix& k) {
            if (z.size() != 1) throw InvalidInput("DiscreteMatrix kernel expects atom indices");
            return k.F(atom_index(z(0), k.F.rows()), atom_index(zp(0), k.F.rows()));
          },
          [&](const Rbf& k) { return std::exp(-(z - zp).squaredNorm() / k.scale); },
          [&](const Polynomial& k) {
            double dot = 0.0;
            for (Index i = 0; i < z.size(); ++i) dot += z(i) * zp(i);
            return std::pow(dot + k.a, k.b);
          },
          [&](const CosineSum& k) {
            double s = k.offset;
            for (Index i = 0; i < z.size(); ++i) s += std::cos(std::abs(z(i) - zp(i)));
            return s;
          },
          [&](const TranslationInvariant& k) {
            // g(u) and g(-u) may round differently; average for exact symmetry.
            const Vector d = z - zp;
            return 0.5 * (k.g(d) + k.g(-d));
          },
          [&](const InnerProductAnalytic& k) {
            double dot = 0.0;
            for (Index i = 0; i < z.size(); ++i) dot += z(i) * zp(i);
            return series(k.coeffs, dot)[0];
          }},
      spec);
}

Matrix gram(const KernelSpec& spec, const Matrix& points) {
  const Index n = points.rows();
  Matrix K(n, n);
  for (Index i = 0; i < n; ++i) {
    const Vector zi = points.row(i).transpose();
    K(i, i) = kernel_eval(spec, zi, zi);
    for (Index j = i + 1; j < n; ++j) {
      const double v = kernel_eval(spec, zi, points.row(j).transpose());
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
  Matrix K(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const Vector zi = a.row(i).transpose();
    for (Index j = 0; j < b.rows(); ++j) K(i, j) = kernel_eval(spec, zi, b.row(j).transpose());
  }
  return K;
}

Index numerical_rank(const Matrix& M, double rel_tol) {
  const Vector ev = linalg::sym_eigenvalues(M);
  if (ev.size() == 0) return 0;
  const double top = ev(0);
  if (ev(ev.size() - 1) < -tol::kPsdSlack * std::max(1.0, top)) {
    throw InvalidInput("numerical_rank: matrix is not positive semi-definite");
  }
  if (top <= 0.0) return 0;
  return (ev.array() > rel_tol * top).count();
}

FeatureMap FeatureMap::discrete(const Matrix& F, const std::vector<double>& probs, Index rank) {
  const Index m = F.rows();
  if (static_cast<Index>(probs.size()) != m) throw InvalidInput("mercer_features: probs size mismatch");
  Vector sqrt_p(m);
  for (Index k = 0; k < m; ++k) {
    if (!(probs[k] > 0.0)) throw InvalidInput("mercer_features: atom probabilities must be positive");
    sqrt_p(k) = std::sqrt(probs[k]);
  }
  const Matrix weighted = sqrt_p.asDiagonal() * F * sqrt_p.asDiagonal();
  const Matrix sym = 0.5 * (weighted + weighted.transpose());
  if (rank < 1 || rank > numerical_rank(sym)) {
    throw InvalidInput("mercer_features: requested rank exceeds numerical rank");
  }
  const linalg::SymEig eig = linalg::sym_eig_top(sym, rank);
  FeatureMap fm;
  fm.kind_ = Kind::DiscreteAtoms;
  fm.rank_ = rank;
  fm.eigenvalues_ = eig.values;
  fm.atoms_ = sqrt_p.cwiseInverse().asDiagonal() * eig.vectors *
              eig.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return fm;
}

FeatureMap FeatureMap::nystrom(const KernelSpec& spec, const Matrix& anchors, Index rank) {
  const Index n = anchors.rows();
  if (n < 1) throw InvalidInput("mercer_features: no anchors");
  const Matrix K = gram(spec, anchors) / static_cast<double>(n);
  if (rank < 1 || rank > numerical_rank(K)) {
    throw InvalidInput("mercer_features: requested rank exceeds numerical rank");
  }
  const linalg::SymEig eig = linalg::sym_eig_top(K, rank);
  FeatureMap fm;
  fm.kind_ = Kind::Nystrom;
  fm.rank_ = rank;
  fm.eigenvalues_ = eig.values;
  fm.spec_ = spec;
  fm.anchors_ = anchors;
  const Vector scale = (eig.values * static_cast<double>(n)).cwiseSqrt().cwiseInverse();
  fm.projection_ = eig.vectors * scale.asDiagonal();
  return fm;
}

Vector FeatureMap::map(const Eigen::Ref<const Vector>& z) const {
  if (kind_ == Kind::DiscreteAtoms) {
    return atoms_.row(atom_index(z(0), atoms_.rows())).transpose();
  }
  Vector k(anchors_.rows());
  for (Index i = 0; i < anchors_.rows(); ++i) k(i) = kernel_eval(spec_, anchors_.row(i).transpose(), z);
  return projection_.transpose() * k;
}

Matrix FeatureMap::map_rows(const Matrix& points) const {
  if (kind_ == Kind::DiscreteAtoms) {
    Matrix out(points.rows(), rank_);
    for (Index i = 0; i < points.rows(); ++i) {
      out.row(i) = atoms_.row(atom_index(points(i, 0), atoms_.rows()));
    }
    return out;
  }
  return cross_gram(spec_, points, anchors_) * projection_;
}

FeatureMap mercer_features(const KernelSpec& spec, const latent::LatentSample& support, Index rank) {
  validate(spec);
  if (const auto* dm = std::get_if<DiscreteMatrix>(&spec)) {
    const auto* space = std::get_if<latent::Discrete>(&support.space);
    if (space == nullptr) throw InvalidInput("mercer_features: discrete kernel needs a discrete space");
    if (space->size() != dm->F.rows()) throw InvalidInput("mercer_features: atom count mismatch");
    return FeatureMap::discrete(dm->F, space->probs, rank);
  }
  return FeatureMap::nystrom(spec, support.points, rank);
}

MetricTensor riemannian_metric(const KernelSpec& spec, const Vector& xi) {
  const Index d = xi.size();
  const Matrix I = Matrix::Identity(d, d);
  Matrix H = std::visit(
      overloaded{
          [&](const DiscreteMatrix&) -> Matrix {
            throw InvalidInput("riemannian_metric: discrete kernels are not differentiable");
          },
          // g(u) = exp(-u / s) of the squared distance: H = -2 g'(0) I.
          [&](const Rbf& k) -> Matrix { return (2.0 / k.scale) * I; },
          [&](const Polynomial& k) -> Matrix {
            const double base = xi.squaredNorm() + k.a;
            Matrix h = k.b * std::pow(base, k.b - 1) * I;
            if (k.b >= 2) h += k.b * (k.b - 1) * std::pow(base, k.b - 2) * (xi * xi.transpose());
            return h;
          },
          [&](const CosineSum&) -> Matrix { return I; },
          [&](const TranslationInvariant& k) -> Matrix { return -k.hessian(Vector::Zero(d)); },
          [&](const InnerProductAnalytic& k) -> Matrix {
            const auto g = series(k.coeffs, xi.squaredNorm());
            return g[1] * I + g[2] * (xi * xi.transpose());
          }},
      spec);
  return {xi, 0.5 * (H + H.transpose())};
}

double curve_length(const KernelSpec& spec, const Matrix& eta) {
  double length = 0.0;
  for (Index t = 0; t + 1 < eta.rows(); ++t) {
    const Vector step = (eta.row(t + 1) - eta.row(t)).transpose();
    const Vector mid = 0.5 * (eta.row(t + 1) + eta.row(t)).transpose();
    const Matrix H = riemannian_metric(spec, mid).H;
    length += std::sqrt(std::max(0.0, step.dot(H * step)));
  }
  return length;
}

bool injectivity_check_discrete(const Matrix& F, double tol) {
  for (Index k = 0; k < F.rows(); ++k) {
    for (Index l = k + 1; l < F.rows(); ++l) {
      if ((F.row(k) - F.row(l)).cwiseAbs().maxCoeff() <= tol) return false;
    }
  }
  return true;
}

double feature_distance_sq(const KernelSpec& spec, const Eigen::Ref<const Vector>& z,
                           const Eigen::Ref<const Vector>& zp) {
  return kernel_eval(spec, z, z) + kernel_eval(spec, zp, zp) - 2.0 * kernel_eval(spec, z, zp);
}

}  // namespace lms::kernels
