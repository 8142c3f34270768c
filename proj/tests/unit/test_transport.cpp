#include "lms/transport.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

using namespace lms;
using namespace lms::transport;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Brute-force minimum over the 120 assignments of the seed-13 clouds,
// computed once with oracle::min_assignment and divided by 5.
constexpr double kSeed13Cost = 0.94554665827237105;

double plan_cost_check(const TransportPlan& plan, const WeightedCloud& a, const WeightedCloud& b) {
  double cost = 0.0;
  Vector rows = Vector::Zero(a.points.rows()), cols = Vector::Zero(b.points.rows());
  for (const auto& f : plan.flows) {
    EXPECT_GE(f.mass, 0.0);
    rows(f.from) += f.mass;
    cols(f.to) += f.mass;
    cost += f.mass * (a.points.row(f.from) - b.points.row(f.to)).norm();
  }
  EXPECT_LE((rows - a.weights).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE((cols - b.weights).cwiseAbs().maxCoeff(), 1e-9);
  return cost;
}

WeightedCloud cloud(const Matrix& pts, const std::vector<int>& mult) {
  const double total = std::accumulate(mult.begin(), mult.end(), 0.0);
  Vector w(static_cast<Index>(mult.size()));
  for (std::size_t i = 0; i < mult.size(); ++i) w(static_cast<Index>(i)) = mult[i] / total;
  return {pts, w};
}

}  // namespace

TEST(Wasserstein, IdenticalCloudsCostZero) {
  Matrix P = oracle::uniform_matrix(6, 3, 1);
  auto plan = wasserstein1(WeightedCloud::uniform(P), WeightedCloud::uniform(P));
  EXPECT_NEAR(plan.cost, 0.0, 1e-15);
}

TEST(Wasserstein, SinglePair) {
  Matrix a = Matrix::Zero(1, 1), b = Matrix::Ones(1, 1);
  EXPECT_DOUBLE_EQ(wasserstein1(WeightedCloud::uniform(a), WeightedCloud::uniform(b)).cost, 1.0);
}

TEST(Wasserstein, Seed13FivePointClouds) {
  Matrix a = oracle::uniform_matrix(5, 3, 13);
  Matrix b = oracle::uniform_matrix(5, 3, 113);
  const double brute = oracle::min_assignment(euclidean_cost(a, b)) / 5.0;
  auto A = WeightedCloud::uniform(a), B = WeightedCloud::uniform(b);
  auto plan = wasserstein1(A, B);
  EXPECT_NEAR(plan.cost, brute, 1e-12);
  EXPECT_NEAR(plan_cost_check(plan, A, B), plan.cost, 1e-12);
}

TEST(Wasserstein, Seed13FrozenValue) {
  Matrix a = oracle::uniform_matrix(5, 3, 13);
  Matrix b = oracle::uniform_matrix(5, 3, 113);
  EXPECT_NEAR(wasserstein1(WeightedCloud::uniform(a), WeightedCloud::uniform(b)).cost, kSeed13Cost, 1e-12);
}

TEST(Wasserstein, RandomUniformCloudsMatchPermutationOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Index k = 2 + static_cast<Index>(seed % 5);
    Matrix a = oracle::uniform_matrix(k, 2, 2000 + seed), b = oracle::uniform_matrix(k, 2, 3000 + seed);
    const double brute = oracle::min_assignment(euclidean_cost(a, b)) / static_cast<double>(k);
    ASSERT_NEAR(wasserstein1(WeightedCloud::uniform(a), WeightedCloud::uniform(b)).cost, brute, 1e-12)
        << "seed " << seed;
  }
}

// Rational weights: expanded into equal multisets, the optimum is again an
// assignment problem.
TEST(Wasserstein, WeightedCloudsMatchExpansionOracle) {
  std::mt19937_64 g(5);
  for (int t = 0; t < 30; ++t) {
    const Index ka = 1 + static_cast<Index>(g() % 4), kb = 1 + static_cast<Index>(g() % 4);
    std::vector<int> ma(static_cast<std::size_t>(ka), 1), mb(static_cast<std::size_t>(kb), 1);
    int total = 6;
    // split 6 units across the points of each side
    auto spread = [&](std::vector<int>& m) {
      int left = total - static_cast<int>(m.size());
      while (left-- > 0) m[g() % m.size()]++;
    };
    spread(ma);
    spread(mb);
    Matrix a = oracle::uniform_matrix(ka, 3, 4000 + t), b = oracle::uniform_matrix(kb, 3, 5000 + t);
    auto A = cloud(a, ma), B = cloud(b, mb);
    auto plan = wasserstein1(A, B);
    ASSERT_NEAR(plan.cost, oracle::w1_by_expansion(a, ma, b, mb), 1e-12) << "trial " << t;
    EXPECT_NEAR(plan_cost_check(plan, A, B), plan.cost, 1e-12);
  }
}

TEST(Wasserstein, UnequalSizes) {
  Matrix a = oracle::uniform_matrix(3, 2, 7), b = oracle::uniform_matrix(2, 2, 8);
  auto A = WeightedCloud::uniform(a), B = WeightedCloud::uniform(b);
  auto plan = wasserstein1(A, B);
  EXPECT_NEAR(plan.cost, oracle::w1_by_expansion(a, {2, 2, 2}, b, {3, 3}), 1e-12);
  EXPECT_NEAR(uniform_transport_cost(euclidean_cost(a, b)), plan.cost, 1e-12);
}

TEST(Wasserstein, Errors) {
  Matrix a = Matrix::Zero(2, 2);
  EXPECT_THROW(wasserstein1(WeightedCloud{Matrix(0, 2), Vector(0)}, WeightedCloud::uniform(a)), InvalidInput);
  EXPECT_THROW(wasserstein1(WeightedCloud{a, Vector::Constant(2, 0.4)}, WeightedCloud::uniform(a)), InvalidInput);
  EXPECT_THROW(wasserstein1(WeightedCloud{a, Eigen::Vector2d(1.5, -0.5)}, WeightedCloud::uniform(a)), InvalidInput);
  EXPECT_THROW(wasserstein1(WeightedCloud::uniform(a), WeightedCloud::uniform(Matrix::Zero(2, 3))), InvalidInput);
}

TEST(Wasserstein, ZeroMassPointsIgnored) {
  Matrix a(3, 1), b(2, 1);
  a << 0, 100, 1;
  b << 0, 1;
  auto plan = wasserstein1(WeightedCloud{a, Eigen::Vector3d(0.5, 0.0, 0.5)}, WeightedCloud::uniform(b));
  EXPECT_NEAR(plan.cost, 0.0, 1e-15);
}

TEST(Wasserstein, MetricAxiomsOnFourPointTriples) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto A = WeightedCloud::uniform(oracle::uniform_matrix(4, 3, 6000 + seed));
    auto B = WeightedCloud::uniform(oracle::uniform_matrix(4, 3, 7000 + seed));
    auto C = WeightedCloud::uniform(oracle::uniform_matrix(4, 3, 8000 + seed));
    const double ab = wasserstein1(A, B).cost, ba = wasserstein1(B, A).cost;
    const double bc = wasserstein1(B, C).cost, ac = wasserstein1(A, C).cost;
    EXPECT_EQ(ab, ba);
    EXPECT_LE(ac, ab + bc + 1e-9);
    EXPECT_GE(ab, 0.0);
  }
}

TEST(Wasserstein, TranslationEquivariance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix a = oracle::uniform_matrix(5, 3, 100 + seed), b = oracle::uniform_matrix(5, 3, 200 + seed);
    Eigen::RowVector3d v = oracle::uniform_matrix(1, 3, 300 + seed).row(0);
    const double base = wasserstein1(WeightedCloud::uniform(a), WeightedCloud::uniform(b)).cost;
    const double both = wasserstein1(WeightedCloud::uniform(a.rowwise() + v), WeightedCloud::uniform(b.rowwise() + v)).cost;
    const double one = wasserstein1(WeightedCloud::uniform(a.rowwise() + v), WeightedCloud::uniform(b)).cost;
    EXPECT_NEAR(both, base, 1e-10);
    EXPECT_LE(std::abs(one - base), v.norm() + 1e-12);
  }
}

TEST(Transportation, IntegerSolutionIsFeasibleAndOptimal) {
  Matrix cost(3, 3);
  cost << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  std::vector<std::int64_t> supply{2, 2, 2}, demand{2, 2, 2};
  auto flows = solve_transportation(cost, supply, demand);
  std::vector<std::int64_t> rows(3, 0), cols(3, 0);
  double total = 0.0;
  for (const auto& f : flows) {
    rows[static_cast<std::size_t>(f.from)] += f.amount;
    cols[static_cast<std::size_t>(f.to)] += f.amount;
    total += f.amount * cost(f.from, f.to);
  }
  EXPECT_EQ(rows, supply);
  EXPECT_EQ(cols, demand);
  EXPECT_DOUBLE_EQ(total, 2.0 * oracle::min_assignment(cost));
}

TEST(Transportation, RejectsUnbalanced) {
  Matrix cost = Matrix::Ones(2, 2);
  std::vector<std::int64_t> s{1, 2}, d{1, 1};
  EXPECT_THROW(solve_transportation(cost, s, d), InvalidInput);
}

TEST(IntegerMasses, RationalWeights) {
  std::int64_t total = 0;
  auto m = integer_masses(Eigen::Vector3d(0.5, 1.0 / 3.0, 1.0 / 6.0), total);
  EXPECT_EQ(total, 6);
  EXPECT_EQ(m, (std::vector<std::int64_t>{3, 2, 1}));
}

TEST(BottleneckFeasible, TrivialThresholds) {
  Matrix c = oracle::uniform_matrix(4, 4, 9, 0.0, 1.0);
  EXPECT_TRUE(bottleneck_feasible(c, c.maxCoeff()));
  EXPECT_FALSE(bottleneck_feasible(c, c.rowwise().minCoeff().minCoeff() - 1e-12));
}

TEST(BottleneckFeasible, AgreesWithExhaustiveMatching) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix c = oracle::uniform_matrix(4, 4, 40 + seed, 0.0, 1.0);
    if (seed % 3 == 0) c(0, 1) = kInf;
    std::mt19937_64 g(seed);
    for (int t = 0; t < 20; ++t) {
      const double thr = static_cast<double>(g() >> 11) * 0x1.0p-53;
      EXPECT_EQ(bottleneck_feasible(c, thr), oracle::has_perfect_matching(c, thr));
    }
  }
}

TEST(BottleneckFeasible, MatchingSizeOnStructuredGraph) {
  Matrix c = Matrix::Constant(3, 3, kInf);
  c(0, 0) = 1;
  c(1, 0) = 1;
  c(2, 2) = 1;
  EXPECT_EQ(max_matching_size(c, 1.0), 2);
  EXPECT_FALSE(bottleneck_feasible(c, 10.0));
}
