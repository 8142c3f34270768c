#include "lms/rips.hpp"

#include "lms/linalg.hpp"
#include "lms/random.hpp"
#include "lms/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace lms::rips {

namespace {

std::int64_t choose2(std::int64_t k) { return k * (k - 1) / 2; }
std::int64_t choose3(std::int64_t k) { return k * (k - 1) * (k - 2) / 6; }

struct Simplex {
  double diam;
  std::int64_t index;
  bool operator<(const Simplex& o) const { return diam < o.diam || (diam == o.diam && index < o.index); }
  bool operator==(const Simplex& o) const { return index == o.index; }
  bool operator>(const Simplex& o) const { return o < *this; }
};

struct EdgeRec {
  double diam;
  int i, j;  // i < j
  std::int64_t index;
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Younger root goes under the older (smaller index); both born at 0.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Cohomology of the 1-skeleton/2-skeleton pair over GF(2). Columns are edges
// in reverse filtration order; the pivot of a coboundary is its earliest
// coface. Coboundaries are regenerated from the stored V columns.
class H1Reducer {
 public:
  H1Reducer(const Matrix& D, double max_scale, const std::vector<EdgeRec>& edges)
      : D_(D), max_scale_(max_scale), n_(static_cast<int>(D.rows())), edges_(edges) {}

  void push_coboundary(int e) {
    const auto& rec = edges_[e];
    for (int k = 0; k < n_; ++k) {
      if (k == rec.i || k == rec.j) continue;
      const double a = D_(rec.i, k), b = D_(rec.j, k);
      if (a > max_scale_ || b > max_scale_) continue;
      const double diam = std::max({rec.diam, a, b});
      int v0 = rec.i, v1 = rec.j, v2 = k;
      if (v2 < v1) std::swap(v1, v2);
      if (v1 < v0) std::swap(v0, v1);
      heap_.push({diam, choose3(v2) + choose2(v1) + v0});
    }
  }

  // Pops cancelling pairs; returns the surviving minimum or index -1.
  Simplex pivot() {
    while (!heap_.empty()) {
      const Simplex top = heap_.top();
      heap_.pop();
      if (!heap_.empty() && heap_.top() == top) {
        heap_.pop();
        continue;
      }
      heap_.push(top);
      return top;
    }
    return {0.0, -1};
  }

  void reduce(const std::vector<int>& positive, std::vector<DiagramPoint>& out) {
    std::unordered_map<std::int64_t, int> owner;  // triangle -> column slot
    owner.reserve(positive.size() * 2);
    std::vector<std::vector<int>> v_columns(positive.size());
    std::vector<int> working;
    for (std::size_t slot = 0; slot < positive.size(); ++slot) {
      const int e = positive[slot];
      heap_ = {};
      working.assign(1, e);
      push_coboundary(e);
      Simplex piv = pivot();
      while (piv.index >= 0) {
        const auto it = owner.find(piv.index);
        if (it == owner.end()) break;
        for (int f : v_columns[it->second]) {
          working.push_back(f);
          push_coboundary(f);
        }
        piv = pivot();
      }
      const double birth = edges_[e].diam;
      if (piv.index < 0) {
        out.push_back({birth, max_scale_, 1, true});
        continue;
      }
      owner.emplace(piv.index, static_cast<int>(slot));
      // Keep V sparse: drop edges appearing an even number of times.
      std::sort(working.begin(), working.end());
      std::vector<int> compact;
      for (std::size_t a = 0; a < working.size();) {
        std::size_t b = a;
        while (b < working.size() && working[b] == working[a]) ++b;
        if ((b - a) % 2 == 1) compact.push_back(working[a]);
        a = b;
      }
      v_columns[slot] = std::move(compact);
      if (piv.diam > birth) out.push_back({birth, piv.diam, 1, false});
    }
  }

 private:
  const Matrix& D_;
  double max_scale_;
  int n_;
  const std::vector<EdgeRec>& edges_;
  std::priority_queue<Simplex, std::vector<Simplex>, std::greater<>> heap_;
};

void sort_points(std::vector<DiagramPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.death != b.death) return a.death < b.death;
    return a.flagged < b.flagged;
  });
}

}  // namespace

std::vector<DiagramPoint> PersistenceDiagram::dimension(int dim) const {
  std::vector<DiagramPoint> out;
  for (const auto& p : points) {
    if (p.dim == dim) out.push_back(p);
  }
  return out;
}

PersistenceDiagram rips_persistence_from_distances(const Matrix& D, double max_scale, int max_dim,
                                                   const RipsOptions& options) {
  const Index n = D.rows();
  if (n < 1 || D.cols() != n) throw InvalidInput("rips_persistence: need a non-empty square distance matrix");
  if (!(max_scale > 0.0) || !std::isfinite(max_scale)) throw InvalidInput("rips_persistence: max_scale must be positive");
  if (max_dim != 0 && max_dim != 1) throw InvalidInput("rips_persistence: max_dim must be 0 or 1");
  if (max_dim == 1 && n > options.cap) {
    throw InvalidInput("rips_persistence: " + std::to_string(n) + " points exceed the cap of " +
                       std::to_string(options.cap) + "; subsample first");
  }
  if (!D.allFinite()) throw InvalidInput("rips_persistence: non-finite distances");

  std::vector<EdgeRec> edges;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (D(i, j) <= max_scale) edges.push_back({D(i, j), i, j, choose2(j) + i});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeRec& a, const EdgeRec& b) {
    return a.diam < b.diam || (a.diam == b.diam && a.index < b.index);
  });

  PersistenceDiagram dgm;
  dgm.max_scale = max_scale;
  UnionFind uf(static_cast<int>(n));
  std::vector<int> positive;
  Index merges = 0;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (uf.unite(edges[e].i, edges[e].j)) {
      ++merges;
      if (edges[e].diam > 0.0) dgm.points.push_back({0.0, edges[e].diam, 0, false});
    } else {
      positive.push_back(e);
    }
  }
  for (Index c = 0; c < n - merges; ++c) dgm.points.push_back({0.0, max_scale, 0, true});

  if (max_dim == 1 && !positive.empty()) {
    std::reverse(positive.begin(), positive.end());
    H1Reducer reducer(D, max_scale, edges);
    reducer.reduce(positive, dgm.points);
  }
  sort_points(dgm.points);
  return dgm;
}

PersistenceDiagram rips_persistence(const Matrix& points, double max_scale, int max_dim, const RipsOptions& options) {
  if (points.rows() < 1) throw InvalidInput("rips_persistence: empty point cloud");
  if (!points.allFinite()) throw InvalidInput("rips_persistence: non-finite coordinates");
  if (max_dim == 1 && points.rows() > options.cap) {
    throw InvalidInput("rips_persistence: " + std::to_string(points.rows()) + " points exceed the cap of " +
                       std::to_string(options.cap) + "; subsample first");
  }
  return rips_persistence_from_distances(linalg::pairwise_distances(points), max_scale, max_dim, options);
}

double bottleneck(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b) {
  const Index k = static_cast<Index>(a.size()), l = static_cast<Index>(b.size());
  if (k + l == 0) return 0.0;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Index m = k + l;
  // Rows: a points then diagonal copies of b. Columns: b points then diagonal copies of a.
  Matrix C = Matrix::Constant(m, m, kInf);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < l; ++j) {
      C(i, j) = std::max(std::abs(a[i].birth - b[j].birth), std::abs(a[i].death - b[j].death));
    }
    C(i, l + i) = a[i].persistence() / 2.0;
  }
  for (Index j = 0; j < l; ++j) C(k + j, j) = b[j].persistence() / 2.0;
  C.bottomRightCorner(l, k).setZero();

  std::vector<double> candidates{0.0};
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (std::isfinite(C(i, j))) candidates.push_back(C(i, j));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (transport::bottleneck_feasible(C, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim) {
  return bottleneck(a.dimension(dim), b.dimension(dim));
}

FeatureCounts count_features(const PersistenceDiagram& diagram, double cutoff) {
  if (!(cutoff >= 0.0)) throw InvalidInput("count_features: cutoff must be >= 0");
  FeatureCounts counts;
  for (const auto& p : diagram.points) {
    if (p.persistence() <= cutoff) continue;
    if (p.dim == 0) ++counts.beta0;
    if (p.dim == 1) ++counts.beta1;
  }
  return counts;
}

std::vector<Index> subsample_indices(Index n, Index m, std::uint64_t seed) {
  if (m < 0 || m > n) throw InvalidInput("subsample_indices: size out of range");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  if (m == n) return order;
  Philox4x32 rng(seed, 0x53554253);  // "SUBS"
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(m));
  std::sort(order.begin(), order.end());
  return order;
}

Matrix select_rows(const Matrix& points, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), points.cols());
  for (std::size_t t = 0; t < rows.size(); ++t) out.row(static_cast<Index>(t)) = points.row(rows[t]);
  return out;
}

}  // namespace lms::rips
