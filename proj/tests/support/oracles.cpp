#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

std::vector<int> identity_perm(Index n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  return perm;
}

}  // namespace

Matrix uniform_matrix(Index rows, Index cols, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 g(seed);
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = lo + (hi - lo) * unit(g);
  return M;
}

Matrix gaussianish_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int k = 0; k < 12; ++k) s += unit(g);
      M(i, j) = s - 6.0;
    }
  return M;
}

Matrix random_symmetric(Index n, std::uint64_t seed) {
  Matrix A = uniform_matrix(n, n, seed);
  Matrix S = A + A.transpose();
  return 0.5 * S;
}

Matrix random_orthogonal(Index n, std::uint64_t seed) {
  Matrix A = gaussianish_matrix(n, n, seed);
  Matrix Q(n, n);
  for (Index j = 0; j < n; ++j) {
    Vector v = A.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Index k = 0; k < j; ++k) v -= Q.col(k).dot(v) * Q.col(k);
    Q.col(j) = v / v.norm();
  }
  return Q;
}

double min_assignment(const Matrix& cost) {
  auto perm = identity_perm(cost.rows());
  double best = kInf;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += cost(static_cast<Index>(i), perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double min_bottleneck_assignment(const Matrix& cost) {
  auto perm = identity_perm(cost.rows());
  double best = kInf;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) worst = std::max(worst, cost(static_cast<Index>(i), perm[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool has_perfect_matching(const Matrix& cost, double threshold) {
  auto perm = identity_perm(cost.rows());
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i) ok = cost(static_cast<Index>(i), perm[i]) <= threshold;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

double w1_by_expansion(const Matrix& a, const std::vector<int>& mult_a, const Matrix& b,
                       const std::vector<int>& mult_b) {
  std::vector<Index> rows, cols;
  for (std::size_t i = 0; i < mult_a.size(); ++i) rows.insert(rows.end(), mult_a[i], static_cast<Index>(i));
  for (std::size_t j = 0; j < mult_b.size(); ++j) cols.insert(cols.end(), mult_b[j], static_cast<Index>(j));
  if (rows.size() != cols.size()) throw std::invalid_argument("w1_by_expansion: totals differ");
  const auto m = static_cast<Index>(rows.size());
  Matrix cost(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) cost(i, j) = (a.row(rows[i]) - b.row(cols[j])).norm();
  return min_assignment(cost) / static_cast<double>(m);
}

namespace {

double linf(const Bar& x, const Bar& y) {
  return std::max(std::abs(x.first - y.first), std::abs(x.second - y.second));
}

double to_diagonal(const Bar& x) { return (x.second - x.first) / 2.0; }

void enumerate_matchings(const std::vector<Bar>& a, const std::vector<Bar>& b, std::size_t i,
                         std::vector<bool>& used, double worst, double& best) {
  if (worst >= best) return;
  if (i == a.size()) {
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j]) worst = std::max(worst, to_diagonal(b[j]));
    best = std::min(best, worst);
    return;
  }
  enumerate_matchings(a, b, i + 1, used, std::max(worst, to_diagonal(a[i])), best);
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    used[j] = true;
    enumerate_matchings(a, b, i + 1, used, std::max(worst, linf(a[i], b[j])), best);
    used[j] = false;
  }
}

}  // namespace

double bottleneck_by_enumeration(const std::vector<Bar>& a, const std::vector<Bar>& b) {
  std::vector<bool> used(b.size(), false);
  double best = kInf;
  enumerate_matchings(a, b, 0, used, 0.0, best);
  return best;
}

std::vector<Interval> rips_by_reduction(const Matrix& D, double max_scale) {
  const Index n = D.rows();
  struct Simplex {
    double value;
    int dim;
    std::vector<int> vertices;
  };
  std::vector<Simplex> simplices;
  for (int i = 0; i < n; ++i) simplices.push_back({0.0, 0, {i}});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (D(i, j) <= max_scale) simplices.push_back({D(i, j), 1, {i, j}});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double v = std::max({D(i, j), D(i, k), D(j, k)});
        if (v <= max_scale) simplices.push_back({v, 2, {i, j, k}});
      }
  std::stable_sort(simplices.begin(), simplices.end(), [](const Simplex& x, const Simplex& y) {
    return std::tie(x.value, x.dim) < std::tie(y.value, y.dim);
  });

  std::map<std::vector<int>, int> position;
  for (std::size_t s = 0; s < simplices.size(); ++s) position[simplices[s].vertices] = static_cast<int>(s);

  // Columns as sorted index sets over Z/2.
  std::vector<std::vector<int>> columns(simplices.size());
  for (std::size_t s = 0; s < simplices.size(); ++s) {
    const auto& v = simplices[s].vertices;
    if (v.size() < 2) continue;
    for (std::size_t drop = 0; drop < v.size(); ++drop) {
      std::vector<int> face;
      for (std::size_t t = 0; t < v.size(); ++t)
        if (t != drop) face.push_back(v[t]);
      columns[s].push_back(position.at(face));
    }
    std::sort(columns[s].begin(), columns[s].end());
  }

  std::map<int, int> low_owner;  // low index -> column that has it
  std::vector<int> paired_with(simplices.size(), -1);
  for (std::size_t s = 0; s < columns.size(); ++s) {
    auto& col = columns[s];
    while (!col.empty()) {
      auto it = low_owner.find(col.back());
      if (it == low_owner.end()) break;
      std::vector<int> sum;
      std::set_symmetric_difference(col.begin(), col.end(), columns[it->second].begin(),
                                    columns[it->second].end(), std::back_inserter(sum));
      col.swap(sum);
    }
    if (!col.empty()) {
      low_owner[col.back()] = static_cast<int>(s);
      paired_with[col.back()] = static_cast<int>(s);
      paired_with[s] = col.back();
    }
  }

  std::vector<Interval> out;
  for (std::size_t s = 0; s < simplices.size(); ++s) {
    const int dim = simplices[s].dim;
    if (dim > 1) continue;
    const bool positive = columns[s].empty();
    if (!positive) continue;
    const double birth = simplices[s].value;
    if (paired_with[s] >= 0) {
      const double death = simplices[static_cast<std::size_t>(paired_with[s])].value;
      if (death > birth) out.push_back({dim, birth, death, false});
    } else if (max_scale > birth) {
      out.push_back({dim, birth, max_scale, true});
    }
  }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) {
    return std::tie(x.dim, x.birth, x.death, x.essential) < std::tie(y.dim, y.birth, y.death, y.essential);
  });
  return out;
}

Matrix mixed_partials(const lms::kernels::KernelSpec& spec, const Vector& xi, double h) {
  const Index d = xi.size();
  Matrix H(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      Vector zp = xi, zm = xi, wp = xi, wm = xi;
      zp(i) += h;
      zm(i) -= h;
      wp(j) += h;
      wm(j) -= h;
      using lms::kernels::kernel_eval;
      H(i, j) = (kernel_eval(spec, zp, wp) - kernel_eval(spec, zp, wm) - kernel_eval(spec, zm, wp) +
                 kernel_eval(spec, zm, wm)) /
                (4.0 * h * h);
    }
  return H;
}

double rel_max_error(const Matrix& a, const Matrix& b, double floor) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), floor);
}

Matrix distances(const Matrix& points) {
  const Index n = points.rows();
  Matrix D(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Index k = 0; k < points.cols(); ++k) {
        const double t = points(i, k) - points(j, k);
        s += t * t;
      }
      D(i, j) = std::sqrt(s);
    }
  return D;
}

Matrix floyd_warshall(Matrix W) {
  const Index n = W.rows();
  for (Index i = 0; i < n; ++i) W(i, i) = 0.0;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) W(i, j) = std::min(W(i, j), W(i, k) + W(k, j));
  return W;
}

}  // namespace oracle
