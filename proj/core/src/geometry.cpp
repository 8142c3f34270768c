#include "lms/geometry.hpp"

#include "lms/linalg.hpp"
#include "lms/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace lms::geometry {

namespace {

struct Adjacency {
  std::vector<std::size_t> start;
  std::vector<Index> target;
  std::vector<double> weight;
};

Adjacency adjacency(const WeightedGraph& g) {
  Adjacency a;
  a.start.assign(static_cast<std::size_t>(g.nodes) + 1, 0);
  for (const auto& e : g.edges) {
    ++a.start[e.i + 1];
    ++a.start[e.j + 1];
  }
  for (Index v = 0; v < g.nodes; ++v) a.start[v + 1] += a.start[v];
  a.target.resize(a.start.back());
  a.weight.resize(a.start.back());
  auto fill = a.start;
  for (const auto& e : g.edges) {
    a.target[fill[e.i]] = e.j;
    a.weight[fill[e.i]++] = e.weight;
    a.target[fill[e.j]] = e.i;
    a.weight[fill[e.j]++] = e.weight;
  }
  return a;
}

}  // namespace

double quantile(std::vector<double>& values, double q) {
  if (values.empty()) throw InvalidInput("quantile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("quantile: q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<double> upper_triangle(const Matrix& D) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(D.rows() * (D.rows() - 1) / 2));
  for (Index i = 0; i < D.rows(); ++i) {
    for (Index j = i + 1; j < D.cols(); ++j) out.push_back(D(i, j));
  }
  return out;
}

WeightedGraph neighbor_graph(const Matrix& points, const GraphMode& mode) {
  const Index n = points.rows();
  if (n < 2) throw InvalidInput("neighbor_graph: need at least 2 points");
  if (!points.allFinite()) throw InvalidInput("neighbor_graph: non-finite coordinates");
  const Matrix D = linalg::pairwise_distances(points);
  if (D.maxCoeff() == 0.0) throw InvalidInput("neighbor_graph: all points coincide");

  WeightedGraph g;
  g.nodes = n;
  g.construction = mode;
  std::vector<char> selected(static_cast<std::size_t>(n * n), 0);
  auto mark = [&](Index i, Index j) {
    if (D(i, j) <= 0.0) return;
    selected[static_cast<std::size_t>(std::min(i, j) * n + std::max(i, j))] = 1;
  };

  if (const auto* knn = std::get_if<Knn>(&mode)) {
    if (knn->k < 1) throw InvalidInput("neighbor_graph: k must be >= 1");
    const Index k = std::min(knn->k, n - 1);
    std::vector<Index> order(static_cast<std::size_t>(n - 1));
    for (Index i = 0; i < n; ++i) {
      order.clear();
      for (Index j = 0; j < n; ++j) {
        if (j != i) order.push_back(j);
      }
      std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index a, Index b) {
        return D(i, a) < D(i, b) || (D(i, a) == D(i, b) && a < b);
      });
      for (Index t = 0; t < k; ++t) mark(i, order[t]);
    }
  } else {
    const double q = std::get<EpsQuantile>(mode).q;
    if (!(q > 0.0 && q <= 1.0)) throw InvalidInput("neighbor_graph: quantile must lie in (0, 1]");
    auto values = upper_triangle(D);
    g.epsilon = quantile(values, q);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (D(i, j) <= g.epsilon) mark(i, j);
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (selected[static_cast<std::size_t>(i * n + j)]) g.edges.push_back({i, j, D(i, j)});
    }
  }
  return g;
}

Matrix graph_geodesics(const WeightedGraph& graph, const Matrix& points, Fallback fallback) {
  const Index n = graph.nodes;
  if (points.rows() != n) throw InvalidInput("graph_geodesics: graph and points disagree in size");
  const auto adj = adjacency(graph);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Matrix D = Matrix::Constant(n, n, kInf);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t src) {
    std::vector<double> dist(static_cast<std::size_t>(n), kInf);
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0.0;
    heap.push({0.0, static_cast<Index>(src)});
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      for (std::size_t k = adj.start[v]; k < adj.start[v + 1]; ++k) {
        const double nd = d + adj.weight[k];
        const Index w = adj.target[k];
        if (nd < dist[w]) {
          dist[w] = nd;
          heap.push({nd, w});
        }
      }
    }
    for (Index j = 0; j < n; ++j) D(static_cast<Index>(src), j) = dist[j];
  });

  // Mirror the upper triangle so the output is exactly symmetric.
  for (Index i = 0; i < n; ++i) {
    D(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      double v = D(i, j);
      if (!std::isfinite(v) && fallback == Fallback::EuclideanFallback) v = (points.row(i) - points.row(j)).norm();
      D(i, j) = v;
      D(j, i) = v;
    }
  }
  return D;
}

double isometry_slope(const Matrix& source, const Matrix& target) {
  if (source.rows() != target.rows() || source.cols() != target.cols() || source.rows() != source.cols()) {
    throw InvalidInput("isometry_slope: shape mismatch");
  }
  long double st = 0.0L, ss = 0.0L;
  for (Index i = 0; i < source.rows(); ++i) {
    for (Index j = i + 1; j < source.cols(); ++j) {
      const double s = source(i, j), t = target(i, j);
      if (!std::isfinite(s) || !std::isfinite(t)) continue;
      st += static_cast<long double>(s) * t;
      ss += static_cast<long double>(s) * s;
    }
  }
  if (ss == 0.0L) throw InvalidInput("isometry_slope: source distances are all zero");
  return static_cast<double>(st / ss);
}

std::vector<Index> components(const WeightedGraph& graph) {
  std::vector<Index> parent(static_cast<std::size_t>(graph.nodes));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : graph.edges) {
    const Index a = find(e.i), b = find(e.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<Index> label(static_cast<std::size_t>(graph.nodes), -1), root_label(parent.size(), -1);
  Index next = 0;
  for (Index v = 0; v < graph.nodes; ++v) {
    const Index r = find(v);
    if (root_label[r] < 0) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

}  // namespace lms::geometry
