#pragma once

// Simulation of Y_ij = X_j(Z_i) + sigma E_ij with i.i.d. zero-mean Gaussian
// process fields X_j of covariance f and standard normal noise E.

#include "lms/kernels.hpp"
#include "lms/latent.hpp"
#include "lms/types.hpp"

#include <cstdint>
#include <optional>

namespace lms::sim {

struct SimConfig {
  Index n = 100;
  Index p = 100;
  double sigma = 1.0;
  kernels::KernelSpec kernel = kernels::Rbf{1.0};
  latent::LatentSpace space = latent::TorusR3{};
  std::uint64_t seed = 0;
  bool retain_fields = false;  // keep X in the output
  bool compute_features = true;  // fill phi_Z for finite-rank kernels
};

void validate(const SimConfig& config);

struct SimOutput {
  Matrix Y;                    // n x p
  latent::LatentSample Z;
  std::optional<Matrix> phi_Z;  // n x r, rows phi(Z_i), finite-rank kernels only
  std::optional<Matrix> X;      // n x p noise-free fields, when retained
  double jitter = 0.0;          // GP sampling jitter actually used
};

/// Draws Z ~ mu^n and then the data matrix. Deterministic given the seed.
SimOutput simulate(const SimConfig& config);

/// Same as simulate() but with the latent sample supplied by the caller.
/// Fields and noise are drawn from the config seed's column streams, so for
/// discrete kernels permuting Z permutes the rows of X exactly.
SimOutput simulate_given_latents(const SimConfig& config, const latent::LatentSample& Z);

/// p^{-1} E[Y Y^T | Z] = [f(Z_i, Z_j)] + sigma^2 I.
Matrix conditional_gram_expectation(const latent::LatentSample& Z, const kernels::KernelSpec& kernel,
                                    double sigma);

/// Exact feature rows phi(Z_i) when the kernel has finite rank (discrete,
/// polynomial, cosine-sum, inner-product series); std::nullopt otherwise.
std::optional<Matrix> true_features(const kernels::KernelSpec& kernel, const latent::LatentSample& Z);

}  // namespace lms::sim
