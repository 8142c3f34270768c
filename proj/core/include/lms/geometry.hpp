#pragma once

// Neighbor graphs, graph geodesics and the isometry slope between two
// distance matrices.

#include "lms/types.hpp"

#include <variant>
#include <vector>

namespace lms::geometry {

struct Knn {
  Index k = 5;
};
struct EpsQuantile {
  double q = 0.05;
};
using GraphMode = std::variant<Knn, EpsQuantile>;

struct Edge {
  Index i = 0;
  Index j = 0;
  double weight = 0.0;
};

struct WeightedGraph {
  Index nodes = 0;
  std::vector<Edge> edges;  // i < j, sorted by (i, j)
  GraphMode construction;
  double epsilon = 0.0;     // EpsQuantile only
};

/// kNN (ties by index, symmetrized by union) or the epsilon graph at the
/// q-quantile of the off-diagonal distances. Zero-distance pairs carry no edge.
WeightedGraph neighbor_graph(const Matrix& points, const GraphMode& mode);

enum class Fallback { EuclideanFallback, Infinite };

/// All-pairs shortest paths (Dijkstra per source). Disconnected pairs get the
/// Euclidean distance between `points` or +infinity.
Matrix graph_geodesics(const WeightedGraph& graph, const Matrix& points, Fallback fallback);

/// Least-squares slope through the origin of target against source over the
/// strict upper triangle. Pairs with a non-finite entry are skipped.
double isometry_slope(const Matrix& source, const Matrix& target);

/// Type-7 (linear interpolation, inclusive) empirical quantile; sorts `values`.
double quantile(std::vector<double>& values, double q);

/// Off-diagonal upper-triangle entries of a square matrix.
std::vector<double> upper_triangle(const Matrix& D);

/// Connected components of the graph (labels 0.. in first-appearance order).
std::vector<Index> components(const WeightedGraph& graph);

}  // namespace lms::geometry
