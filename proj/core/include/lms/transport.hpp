#pragma once

// Exact discrete optimal transport (1-Wasserstein, Euclidean ground cost) by
// network simplex, and threshold feasibility for bottleneck matchings.

#include "lms/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lms::transport {

struct WeightedCloud {
  Matrix points;   // k x d
  Vector weights;  // k, non-negative, summing to 1

  static WeightedCloud uniform(Matrix points);
};

struct Flow {
  Index from = 0;
  Index to = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<Flow> flows;
  double cost = 0.0;
};

/// Exact W1 between equal-mass clouds; masses are scaled to integers before
/// the network simplex solve.
TransportPlan wasserstein1(const WeightedCloud& a, const WeightedCloud& b);

/// Dense Euclidean cost matrix between the rows of a and b.
Matrix euclidean_cost(const Matrix& a, const Matrix& b);

struct IntegerFlow {
  Index from = 0;
  Index to = 0;
  std::int64_t amount = 0;
};

/// Transportation problem min sum c_ij x_ij with row sums `supply` and column
/// sums `demand` (equal totals, all entries positive). Returns the optimal
/// basic flows.
std::vector<IntegerFlow> solve_transportation(const Matrix& cost, std::span<const std::int64_t> supply,
                                              std::span<const std::int64_t> demand);

/// W1 with uniform weights on both sides of a precomputed cost matrix.
double uniform_transport_cost(const Matrix& cost);

/// Integer masses proportional to `weights`, via the LCM of rational
/// denominators (falls back to a 2^40 grid when denominators do not resolve).
std::vector<std::int64_t> integer_masses(const Vector& weights, std::int64_t& total);

/// True iff a perfect matching exists using only entries with cost <= threshold.
/// Entries equal to +infinity are never usable.
bool bottleneck_feasible(const Matrix& costs, double threshold);

/// Size of a maximum matching in the bipartite graph {(i, j) : costs(i, j) <= threshold}.
Index max_matching_size(const Matrix& costs, double threshold);

}  // namespace lms::transport
