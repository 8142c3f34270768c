#include "lms/simulate.hpp"

#include "lms/linalg.hpp"
#include "lms/parallel.hpp"
#include "lms/random.hpp"
#include "lms/tolerances.hpp"

#include <cmath>

namespace lms::sim {

namespace {

constexpr std::uint64_t kFieldStream = 0x4649454Cull;  // "FIEL"
constexpr std::uint64_t kNoiseStream = 0x4E4F4953ull;  // "NOIS"
constexpr std::uint64_t kAnchorStream = 0x414E4348ull; // "ANCH"
constexpr Index kAnchors = 200;

// n x p standard normals, column j from its own stream.
Matrix column_normals(Index rows, Index cols, std::uint64_t seed, std::uint64_t tag) {
  Matrix G(rows, cols);
  parallel_for(static_cast<std::size_t>(cols), [&](std::size_t j) {
    Philox4x32 rng(seed, stream_id(tag, j));
    fill_standard_normal(G.col(static_cast<Index>(j)), rng);
  });
  return G;
}

}  // namespace

void validate(const SimConfig& c) {
  if (c.n < 1 || c.p < 1) throw InvalidInput("SimConfig: n and p must be >= 1");
  if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma)) throw InvalidInput("SimConfig: sigma must be >= 0");
  latent::validate(c.space);
  kernels::validate(c.kernel);
  if (const auto* dm = std::get_if<kernels::DiscreteMatrix>(&c.kernel)) {
    const auto* d = std::get_if<latent::Discrete>(&c.space);
    if (d == nullptr || d->size() != dm->F.rows()) {
      throw InvalidInput("SimConfig: discrete kernel needs a discrete space with matching atom count");
    }
  }
}

SimOutput simulate(const SimConfig& config) {
  validate(config);
  return simulate_given_latents(config, latent::sample(config.space, config.n, config.seed));
}

SimOutput simulate_given_latents(const SimConfig& config, const latent::LatentSample& Z) {
  validate(config);
  const Index n = Z.size();
  const Index p = config.p;
  SimOutput out;
  out.Z = Z;

  Matrix X;
  if (const auto* dm = std::get_if<kernels::DiscreteMatrix>(&config.kernel)) {
    // One Gaussian vector per atom and column, broadcast to the rows.
    const Index m = dm->F.rows();
    const double mean_diag = dm->F.trace() / static_cast<double>(m);
    const auto chol = linalg::cholesky_jitter(dm->F, tol::kGpJitter * std::abs(mean_diag));
    out.jitter = chol.jitter;
    const Matrix centres = chol.lower * column_normals(m, p, config.seed, kFieldStream);
    X.resize(n, p);
    for (Index i = 0; i < n; ++i) X.row(i) = centres.row(Z.atom(i));
  } else {
    const Matrix K = kernels::gram(config.kernel, Z.points);
    const double mean_diag = K.trace() / static_cast<double>(n);
    const auto chol = linalg::cholesky_jitter(K, tol::kGpJitter * std::abs(mean_diag));
    out.jitter = chol.jitter;
    X.noalias() = chol.lower.triangularView<Eigen::Lower>() * column_normals(n, p, config.seed, kFieldStream);
  }

  out.Y = X;
  if (config.sigma > 0.0) out.Y += config.sigma * column_normals(n, p, config.seed, kNoiseStream);
  if (config.retain_fields) out.X = std::move(X);
  if (config.compute_features) out.phi_Z = true_features(config.kernel, Z);
  return out;
}

Matrix conditional_gram_expectation(const latent::LatentSample& Z, const kernels::KernelSpec& kernel,
                                    double sigma) {
  Matrix K = kernels::gram(kernel, Z.points);
  K.diagonal().array() += sigma * sigma;
  return K;
}

std::optional<Matrix> true_features(const kernels::KernelSpec& kernel, const latent::LatentSample& Z) {
  if (const auto* dm = std::get_if<kernels::DiscreteMatrix>(&kernel)) {
    const auto& space = std::get<latent::Discrete>(Z.space);
    const Index rank = kernels::numerical_rank(dm->F);
    // Feature map with respect to mu; atoms of zero probability get weight
    // only through F itself, so fall back to uniform weights in that case.
    std::vector<double> probs = space.probs;
    for (double w : probs) {
      if (!(w > 0.0)) {
        probs.assign(probs.size(), 1.0 / static_cast<double>(probs.size()));
        break;
      }
    }
    return kernels::FeatureMap::discrete(dm->F, probs, rank).map_rows(Z.points);
  }
  if (std::holds_alternative<kernels::Polynomial>(kernel) ||
      std::holds_alternative<kernels::CosineSum>(kernel)) {
    // Finite-rank families: a Nystrom map at full numerical rank reproduces f
    // exactly, so phi_hat is a valid Mercer feature map up to rotation.
    const auto anchors = latent::sample(Z.space, kAnchors, stream_id(Z.seed, kAnchorStream));
    const Index rank = kernels::numerical_rank(kernels::gram(kernel, anchors.points) /
                                               static_cast<double>(kAnchors));
    return kernels::FeatureMap::nystrom(kernel, anchors.points, rank).map_rows(Z.points);
  }
  return std::nullopt;
}

}  // namespace lms::sim
