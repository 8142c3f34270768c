#include "lms/transport.hpp"

#include "lms/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace lms::transport {

namespace {

// Summing in sorted order makes the total independent of which side is the
// source, so W1(a, b) and W1(b, a) agree to the last bit.
double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

// Primal network simplex on the bipartite transportation graph with an
// artificial root. Non-tree arcs sit at zero flow (the problem is
// uncapacitated). Strongly feasible trees plus the last-blocking-arc leaving
// rule prevent cycling under degeneracy.
class NetworkSimplex {
 public:
  NetworkSimplex(const Matrix& cost, std::span<const std::int64_t> supply, std::span<const std::int64_t> demand)
      : cost_(cost),
        m_(static_cast<int>(supply.size())),
        n_(static_cast<int>(demand.size())),
        nodes_(m_ + n_ + 1),
        root_(m_ + n_),
        real_arcs_(static_cast<std::int64_t>(m_) * n_) {
    const double max_cost = cost.size() > 0 ? cost.cwiseAbs().maxCoeff() : 0.0;
    artificial_cost_ = 2.0 * max_cost + 1.0;
    eps_ = 1e-12 * (artificial_cost_ + 1.0) * 16.0;

    const std::int64_t arcs = real_arcs_ + m_ + n_;
    flow_.assign(static_cast<std::size_t>(arcs), 0);
    in_tree_.assign(static_cast<std::size_t>(arcs), 0);
    for (int i = 0; i < m_; ++i) {
      const auto a = artificial_source(i);
      flow_[a] = supply[i];
      in_tree_[a] = 1;
    }
    for (int j = 0; j < n_; ++j) {
      const auto a = artificial_sink(j);
      flow_[a] = demand[j];
      in_tree_[a] = 1;
    }
    parent_.assign(nodes_, -1);
    pred_.assign(nodes_, -1);
    depth_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    tree_arcs_.reserve(nodes_);
    rebuild_tree();

    block_ = std::max<std::int64_t>(16, static_cast<std::int64_t>(std::sqrt(static_cast<double>(arcs))));
  }

  void run() {
    const std::int64_t arcs = static_cast<std::int64_t>(flow_.size());
    std::int64_t max_pivots = 50 * arcs + 1000;
    while (true) {
      const std::int64_t entering = find_entering();
      if (entering < 0) break;
      pivot(entering);
      if (--max_pivots < 0) throw NumericalError("network simplex: pivot limit exceeded");
    }
    for (int i = 0; i < m_; ++i) {
      if (flow_[artificial_source(i)] != 0) throw NumericalError("network simplex: infeasible problem");
    }
    for (int j = 0; j < n_; ++j) {
      if (flow_[artificial_sink(j)] != 0) throw NumericalError("network simplex: infeasible problem");
    }
  }

  std::vector<IntegerFlow> flows() const {
    std::vector<IntegerFlow> out;
    for (std::int64_t a = 0; a < real_arcs_; ++a) {
      if (flow_[a] > 0) out.push_back({a / n_, a % n_, flow_[a]});
    }
    return out;
  }

 private:
  std::int64_t artificial_source(int i) const { return real_arcs_ + i; }
  std::int64_t artificial_sink(int j) const { return real_arcs_ + m_ + j; }

  int tail(std::int64_t a) const {
    if (a < real_arcs_) return static_cast<int>(a / n_);
    if (a < real_arcs_ + m_) return static_cast<int>(a - real_arcs_);
    return root_;
  }
  int head(std::int64_t a) const {
    if (a < real_arcs_) return m_ + static_cast<int>(a % n_);
    if (a < real_arcs_ + m_) return root_;
    return m_ + static_cast<int>(a - real_arcs_ - m_);
  }
  double arc_cost(std::int64_t a) const {
    if (a < real_arcs_) return cost_(a / n_, a % n_);
    return artificial_cost_;
  }
  double reduced_cost(std::int64_t a) const { return arc_cost(a) + pi_[tail(a)] - pi_[head(a)]; }

  // Block search pricing: scan blocks of arcs from the cursor and take the
  // most negative reduced cost of the first block that has one.
  std::int64_t find_entering() {
    const std::int64_t arcs = static_cast<std::int64_t>(flow_.size());
    std::int64_t best = -1;
    double best_value = -eps_;
    std::int64_t scanned = 0;
    std::int64_t in_block = 0;
    while (scanned < arcs) {
      const std::int64_t a = cursor_;
      cursor_ = cursor_ + 1 == arcs ? 0 : cursor_ + 1;
      ++scanned;
      if (!in_tree_[a]) {
        const double rc = reduced_cost(a);
        if (rc < best_value) {
          best_value = rc;
          best = a;
        }
      }
      if (++in_block == block_) {
        if (best >= 0) return best;
        in_block = 0;
      }
    }
    return best;
  }

  void pivot(std::int64_t entering) {
    const int u = tail(entering), v = head(entering);

    // Paths from u and v up to their common ancestor (the apex).
    path_u_.clear();
    path_v_.clear();
    int a = u, b = v;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        path_u_.push_back(a);
        a = parent_[a];
      } else {
        path_v_.push_back(b);
        b = parent_[b];
      }
    }

    // Orientation follows the entering arc: apex -> ... -> u -> v -> ... -> apex.
    // On the u side the cycle runs parent -> w; on the v side w -> parent.
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
    std::int64_t delta = kInf;
    for (int w : path_u_) {
      const auto arc = pred_[w];
      if (head(arc) != w) delta = std::min(delta, flow_[arc]);
    }
    for (int w : path_v_) {
      const auto arc = pred_[w];
      if (tail(arc) != w) delta = std::min(delta, flow_[arc]);
    }
    if (delta == kInf) throw NumericalError("network simplex: unbounded cycle");

    // Last blocking arc in orientation order starting at the apex.
    std::int64_t leaving = -1;
    for (auto it = path_u_.rbegin(); it != path_u_.rend(); ++it) {
      const auto arc = pred_[*it];
      if (head(arc) != *it && flow_[arc] == delta) leaving = arc;
    }
    for (int w : path_v_) {
      const auto arc = pred_[w];
      if (tail(arc) != w && flow_[arc] == delta) leaving = arc;
    }

    if (delta > 0) {
      for (int w : path_u_) {
        const auto arc = pred_[w];
        flow_[arc] += head(arc) == w ? delta : -delta;
      }
      for (int w : path_v_) {
        const auto arc = pred_[w];
        flow_[arc] += tail(arc) == w ? delta : -delta;
      }
      flow_[entering] += delta;
    }

    in_tree_[leaving] = 0;
    in_tree_[entering] = 1;
    for (auto& t : tree_arcs_) {
      if (t == leaving) {
        t = entering;
        break;
      }
    }
    relink();
  }

  void rebuild_tree() {
    tree_arcs_.clear();
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(in_tree_.size()); ++a) {
      if (in_tree_[a]) tree_arcs_.push_back(a);
    }
    relink();
  }

  // Recomputes parent, depth and potentials by BFS from the root.
  void relink() {
    adj_start_.assign(nodes_ + 1, 0);
    for (auto a : tree_arcs_) {
      ++adj_start_[tail(a) + 1];
      ++adj_start_[head(a) + 1];
    }
    for (int i = 0; i < nodes_; ++i) adj_start_[i + 1] += adj_start_[i];
    adj_.resize(adj_start_[nodes_]);
    fill_.assign(adj_start_.begin(), adj_start_.end() - 1);
    for (auto a : tree_arcs_) {
      adj_[fill_[tail(a)]++] = a;
      adj_[fill_[head(a)]++] = a;
    }
    std::fill(parent_.begin(), parent_.end(), -2);
    queue_.clear();
    queue_.push_back(root_);
    parent_[root_] = -1;
    pred_[root_] = -1;
    depth_[root_] = 0;
    pi_[root_] = 0.0;
    for (std::size_t q = 0; q < queue_.size(); ++q) {
      const int x = queue_[q];
      for (int k = adj_start_[x]; k < adj_start_[x + 1]; ++k) {
        const auto arc = adj_[k];
        const int y = tail(arc) == x ? head(arc) : tail(arc);
        if (parent_[y] != -2) continue;
        parent_[y] = x;
        pred_[y] = arc;
        depth_[y] = depth_[x] + 1;
        // Tree arcs have zero reduced cost.
        pi_[y] = tail(arc) == x ? pi_[x] + arc_cost(arc) : pi_[x] - arc_cost(arc);
        queue_.push_back(y);
      }
    }
    if (static_cast<int>(queue_.size()) != nodes_) throw NumericalError("network simplex: tree disconnected");
  }

  const Matrix& cost_;
  int m_, n_, nodes_, root_;
  std::int64_t real_arcs_;
  double artificial_cost_ = 1.0;
  double eps_ = 1e-12;
  std::vector<std::int64_t> flow_;
  std::vector<char> in_tree_;
  std::vector<int> parent_, depth_;
  std::vector<std::int64_t> pred_;
  std::vector<double> pi_;
  std::vector<std::int64_t> tree_arcs_;
  std::vector<int> adj_start_, fill_, queue_;
  std::vector<std::int64_t> adj_;
  std::vector<int> path_u_, path_v_;
  std::int64_t cursor_ = 0;
  std::int64_t block_ = 16;
};

// Best rational approximation with denominator <= max_den (continued fractions).
bool rationalize(double x, std::int64_t max_den, std::int64_t& num, std::int64_t& den) {
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_f = std::floor(frac);
    if (a_f > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_f);
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= 1e-13 * std::max(1.0, x)) {
      num = p1;
      den = q1;
      return true;
    }
    const double rest = frac - a_f;
    if (rest <= 0.0) break;
    frac = 1.0 / rest;
  }
  return false;
}

void check_weights(const Vector& w, const char* side) {
  if (w.size() == 0) throw InvalidInput(std::string("wasserstein1: empty cloud ") + side);
  if ((w.array() < 0.0).any() || !w.allFinite()) {
    throw InvalidInput(std::string("wasserstein1: negative weights in cloud ") + side);
  }
  if (std::abs(w.sum() - 1.0) > 1e-9) throw InvalidInput("wasserstein1: total masses differ");
}

}  // namespace

WeightedCloud WeightedCloud::uniform(Matrix points) {
  const Index k = points.rows();
  return {std::move(points), Vector::Constant(k, 1.0 / static_cast<double>(std::max<Index>(k, 1)))};
}

Matrix euclidean_cost(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw InvalidInput("euclidean_cost: dimension mismatch");
  Matrix C(a.rows(), b.rows());
  for (Index j = 0; j < b.rows(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) C(i, j) = (a.row(i) - b.row(j)).norm();
  }
  return C;
}

std::vector<IntegerFlow> solve_transportation(const Matrix& cost, std::span<const std::int64_t> supply,
                                              std::span<const std::int64_t> demand) {
  if (static_cast<Index>(supply.size()) != cost.rows() || static_cast<Index>(demand.size()) != cost.cols()) {
    throw InvalidInput("solve_transportation: shape mismatch");
  }
  if (supply.empty() || demand.empty()) throw InvalidInput("solve_transportation: empty side");
  if (!cost.allFinite()) throw InvalidInput("solve_transportation: non-finite cost");
  std::int64_t s = 0, d = 0;
  for (auto x : supply) {
    if (x <= 0) throw InvalidInput("solve_transportation: supplies must be positive");
    s += x;
  }
  for (auto x : demand) {
    if (x <= 0) throw InvalidInput("solve_transportation: demands must be positive");
    d += x;
  }
  if (s != d) throw InvalidInput("solve_transportation: total supply differs from total demand");
  NetworkSimplex solver(cost, supply, demand);
  solver.run();
  return solver.flows();
}

std::vector<std::int64_t> integer_masses(const Vector& weights, std::int64_t& total) {
  constexpr std::int64_t kMaxDen = 1'000'000;
  constexpr std::int64_t kMaxLcm = std::int64_t{1} << 40;
  std::vector<std::int64_t> nums(weights.size()), dens(weights.size());
  std::int64_t lcm = 1;
  bool exact = true;
  for (Index i = 0; i < weights.size() && exact; ++i) {
    if (!rationalize(weights(i), kMaxDen, nums[i], dens[i])) {
      exact = false;
      break;
    }
    lcm = std::lcm(lcm, dens[i]);
    if (lcm > kMaxLcm) exact = false;
  }
  std::vector<std::int64_t> out(weights.size());
  if (exact) {
    total = 0;
    for (Index i = 0; i < weights.size(); ++i) {
      out[i] = nums[i] * (lcm / dens[i]);
      total += out[i];
    }
    if (total == lcm) return out;
  }
  // Rounded grid; the largest entry absorbs the rounding remainder.
  total = kMaxLcm;
  std::int64_t sum = 0;
  Index arg = 0;
  for (Index i = 0; i < weights.size(); ++i) {
    out[i] = std::llround(weights(i) * static_cast<double>(total));
    sum += out[i];
    if (out[i] > out[arg]) arg = i;
  }
  out[arg] += total - sum;
  return out;
}

TransportPlan wasserstein1(const WeightedCloud& a, const WeightedCloud& b) {
  check_weights(a.weights, "A");
  check_weights(b.weights, "B");
  if (a.points.rows() != a.weights.size() || b.points.rows() != b.weights.size()) {
    throw InvalidInput("wasserstein1: weights do not match point counts");
  }
  if (a.points.cols() != b.points.cols()) throw InvalidInput("wasserstein1: dimension mismatch");

  // Both sides on a common integer grid L.
  std::int64_t total_a = 0, total_b = 0;
  auto mass_a = integer_masses(a.weights, total_a);
  auto mass_b = integer_masses(b.weights, total_b);
  const std::int64_t common = std::lcm(total_a, total_b);
  if (common <= 0 || common > (std::int64_t{1} << 52)) {
    throw NumericalError("wasserstein1: mass grid too fine");
  }
  for (auto& x : mass_a) x *= common / total_a;
  for (auto& x : mass_b) x *= common / total_b;

  // Zero-mass points take no part in the flow problem.
  std::vector<Index> keep_a, keep_b;
  std::vector<std::int64_t> supply, demand;
  for (Index i = 0; i < static_cast<Index>(mass_a.size()); ++i) {
    if (mass_a[i] > 0) {
      keep_a.push_back(i);
      supply.push_back(mass_a[i]);
    }
  }
  for (Index j = 0; j < static_cast<Index>(mass_b.size()); ++j) {
    if (mass_b[j] > 0) {
      keep_b.push_back(j);
      demand.push_back(mass_b[j]);
    }
  }
  Matrix cost(static_cast<Index>(keep_a.size()), static_cast<Index>(keep_b.size()));
  for (Index i = 0; i < cost.rows(); ++i) {
    for (Index j = 0; j < cost.cols(); ++j) {
      cost(i, j) = (a.points.row(keep_a[i]) - b.points.row(keep_b[j])).norm();
    }
  }
  const auto flows = solve_transportation(cost, supply, demand);

  TransportPlan plan;
  const double scale = 1.0 / static_cast<double>(common);
  std::vector<double> terms;
  for (const auto& f : flows) {
    const double mass = static_cast<double>(f.amount) * scale;
    plan.flows.push_back({keep_a[f.from], keep_b[f.to], mass});
    terms.push_back(mass * cost(f.from, f.to));
  }
  plan.cost = ordered_sum(terms);
  return plan;
}

double uniform_transport_cost(const Matrix& cost) {
  const auto k = static_cast<std::int64_t>(cost.rows());
  const auto l = static_cast<std::int64_t>(cost.cols());
  if (k == 0 || l == 0) throw InvalidInput("uniform_transport_cost: empty side");
  const std::int64_t common = std::lcm(k, l);
  const std::vector<std::int64_t> supply(static_cast<std::size_t>(k), common / k);
  const std::vector<std::int64_t> demand(static_cast<std::size_t>(l), common / l);
  std::vector<double> terms;
  for (const auto& f : solve_transportation(cost, supply, demand)) {
    terms.push_back(static_cast<double>(f.amount) * cost(f.from, f.to));
  }
  return ordered_sum(terms) / static_cast<double>(common);
}

Index max_matching_size(const Matrix& costs, double threshold) {
  // Hopcroft-Karp on the threshold graph.
  const Index rows = costs.rows(), cols = costs.cols();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (costs(i, j) <= threshold) adj[i].push_back(static_cast<int>(j));
    }
  }
  constexpr int kNone = -1;
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_row(static_cast<std::size_t>(rows), kNone), match_col(static_cast<std::size_t>(cols), kNone);
  std::vector<int> dist(static_cast<std::size_t>(rows));

  auto bfs = [&] {
    std::queue<int> q;
    bool found = false;
    for (Index i = 0; i < rows; ++i) {
      if (match_row[i] == kNone) {
        dist[i] = 0;
        q.push(static_cast<int>(i));
      } else {
        dist[i] = kInf;
      }
    }
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      for (int j : adj[i]) {
        const int k = match_col[j];
        if (k == kNone) {
          found = true;
        } else if (dist[k] == kInf) {
          dist[k] = dist[i] + 1;
          q.push(k);
        }
      }
    }
    return found;
  };

  std::vector<std::size_t> next(static_cast<std::size_t>(rows));
  std::function<bool(int)> dfs = [&](int i) -> bool {
    for (; next[i] < adj[i].size(); ++next[i]) {
      const int j = adj[i][next[i]];
      const int k = match_col[j];
      if (k == kNone || (dist[k] == dist[i] + 1 && dfs(k))) {
        match_row[i] = j;
        match_col[j] = i;
        ++next[i];
        return true;
      }
    }
    dist[i] = kInf;
    return false;
  };

  Index size = 0;
  while (bfs()) {
    std::fill(next.begin(), next.end(), 0);
    for (Index i = 0; i < rows; ++i) {
      if (match_row[i] == kNone && dfs(static_cast<int>(i))) ++size;
    }
  }
  return size;
}

bool bottleneck_feasible(const Matrix& costs, double threshold) {
  if (costs.rows() != costs.cols()) return false;
  if (costs.rows() == 0) return true;
  return max_matching_size(costs, threshold) == costs.rows();
}

}  // namespace lms::transport
