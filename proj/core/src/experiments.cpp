#include "lms/experiments.hpp"

#include "lms/embed.hpp"
#include "lms/random.hpp"

namespace lms::experiments {

namespace {

Matrix fixed_gaussian(Index rows, Index cols, std::uint64_t key) {
  Philox4x32 rng(key, 0);
  Matrix A(rows, cols);
  fill_standard_normal(A.reshaped(), rng);
  return A;
}

std::vector<double> uniform_probs(Index m) {
  return std::vector<double>(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
}

}  // namespace

latent::TorusR3 reference_torus() { return {0.36, 0.18}; }

Matrix mixture3_covariance() {
  Matrix S(3, 3);
  S << 1.0, 0.5, 0.25,
       0.5, 1.0, 0.5,
       0.25, 0.5, 1.0;
  return S;
}

Matrix mixture10_covariance() {
  const Matrix A = fixed_gaussian(10, 10, 11);
  return Matrix::Identity(10, 10) + 0.01 * A * A.transpose();
}

Matrix config1_matrix() {
  const Matrix A = fixed_gaussian(6, 6, 7);
  return A * A.transpose() / 6.0 + 0.25 * Matrix::Identity(6, 6);
}

sim::SimConfig torus_config(Index n, Index p, double sigma, std::uint64_t seed) {
  sim::SimConfig c;
  c.n = n;
  c.p = p;
  c.sigma = sigma;
  c.kernel = kernels::Rbf{1.0};
  c.space = reference_torus();
  c.seed = seed;
  c.compute_features = false;
  return c;
}

sim::SimConfig mixture3_config(Index n, Index p, std::uint64_t seed) {
  sim::SimConfig c;
  c.n = n;
  c.p = p;
  c.sigma = 1.0;
  c.kernel = kernels::DiscreteMatrix{mixture3_covariance()};
  c.space = latent::Discrete{uniform_probs(3)};
  c.seed = seed;
  return c;
}

sim::SimConfig mixture10_config(std::uint64_t seed) {
  sim::SimConfig c;
  c.n = 250;
  c.p = 10000;
  c.sigma = 10.0;
  c.kernel = kernels::DiscreteMatrix{mixture10_covariance()};
  c.space = latent::Discrete{uniform_probs(10)};
  c.seed = seed;
  c.compute_features = false;
  return c;
}

sim::SimConfig dimselect_config(int which, double sigma, std::uint64_t seed) {
  sim::SimConfig c;
  c.n = 500;
  c.p = 1000;
  c.sigma = sigma;
  c.seed = seed;
  c.compute_features = false;
  switch (which) {
    case 1:
      c.kernel = kernels::DiscreteMatrix{config1_matrix()};
      c.space = latent::Discrete{uniform_probs(6)};
      break;
    case 2:
      c.kernel = kernels::Polynomial{1.0, 2};
      c.space = latent::holed_square_region();
      break;
    case 3:
      c.kernel = kernels::CosineSum{2.0};
      c.space = latent::z_shape_region();
      break;
    case 4:
      c.kernel = kernels::Rbf{2.0};
      c.space = latent::ring_region();
      break;
    default:
      throw InvalidInput("dimselect_config: configuration must be 1, 2, 3 or 4");
  }
  return c;
}

double mixture_pairwise_error(Index n, Index p, std::uint64_t seed) {
  const auto out = sim::simulate(mixture3_config(n, p, seed));
  const auto emb = embed::pc_scores(out.Y, 3);
  return embed::pairwise_discrepancy(emb.scaled_scores(), *out.phi_Z);
}

}  // namespace lms::experiments
