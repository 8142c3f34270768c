#pragma once

// Desk-scale configurations of the reference experiments, shared by the CLI
// `reproduce` targets and the acceptance suite.

#include "lms/rips.hpp"
#include "lms/simulate.hpp"

#include <cstdint>

namespace lms::experiments {

/// Torus used by the topology, geodesic and regression runs. Small radii keep
/// 400 uniform samples dense enough for a 0.2 persistence cutoff.
latent::TorusR3 reference_torus();

/// 3-component mixture covariance (full rank).
Matrix mixture3_covariance();

/// 10-component mixture covariance: identity plus a small fixed random PSD term.
Matrix mixture10_covariance();

/// Fixed positive-definite 6 x 6 matrix for the discrete dimension-selection run.
Matrix config1_matrix();

sim::SimConfig torus_config(Index n, Index p, double sigma, std::uint64_t seed);
sim::SimConfig mixture3_config(Index n, Index p, std::uint64_t seed);
sim::SimConfig mixture10_config(std::uint64_t seed);

/// The four dimension-selection configurations (1: discrete rank 6,
/// 2: quadratic kernel on the holed square, 3: cosine sum on the Z shape,
/// 4: RBF on the ring), n = 500, p = 1000.
sim::SimConfig dimselect_config(int which, double sigma, std::uint64_t seed);

/// Max pairwise distance error between p^{-1/2} scores (r = 3) and the
/// mixture feature points, for one realisation.
double mixture_pairwise_error(Index n, Index p, std::uint64_t seed);

inline constexpr double kTorusMaxScale = 1.5;
inline constexpr double kFeatureCutoff = 0.2;

}  // namespace lms::experiments
