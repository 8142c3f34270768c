#include "lms/simulate.hpp"
#include "lms/experiments.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace lms;
using namespace lms::sim;

namespace {

// Max |p^{-1} Y Y^T - E| in units of the Monte-Carlo standard error
// sqrt((C_ii C_kk + C_ik^2) / p) of a product of jointly Gaussian entries.
struct McReport {
  double worst_z = 0.0;
  double frac_within_5 = 0.0;
  double max_abs = 0.0;
};

McReport lemma3_check(const SimOutput& out, const Matrix& C) {
  const double p = static_cast<double>(out.Y.cols());
  Matrix emp = out.Y * out.Y.transpose() / p;
  McReport rep;
  Index within = 0, total = 0;
  for (Index i = 0; i < C.rows(); ++i)
    for (Index k = 0; k < C.cols(); ++k) {
      const double se = std::sqrt((C(i, i) * C(k, k) + C(i, k) * C(i, k)) / p);
      const double z = std::abs(emp(i, k) - C(i, k)) / se;
      rep.worst_z = std::max(rep.worst_z, z);
      rep.max_abs = std::max(rep.max_abs, std::abs(emp(i, k) - C(i, k)));
      within += z <= 5.0;
      ++total;
    }
  rep.frac_within_5 = static_cast<double>(within) / static_cast<double>(total);
  return rep;
}

}  // namespace

TEST(Simulate, ShapesAndNoiseDecomposition) {
  SimConfig c;
  c.n = 30;
  c.p = 40;
  c.sigma = 0.5;
  c.retain_fields = true;
  c.seed = 3;
  auto out = simulate(c);
  ASSERT_EQ(out.Y.rows(), 30);
  ASSERT_EQ(out.Y.cols(), 40);
  ASSERT_TRUE(out.X.has_value());
  // Y - X is sigma times something that looks standard normal.
  Matrix E = (out.Y - *out.X) / c.sigma;
  const double mean = E.mean();
  const double var = (E.array() - mean).square().mean();
  EXPECT_NEAR(mean, 0.0, 0.1);
  EXPECT_NEAR(var, 1.0, 0.1);
}

TEST(Simulate, DiscreteNoiselessRows) {
  SimConfig c;
  c.n = 4;
  c.p = 10000;
  c.sigma = 0.0;
  c.kernel = kernels::DiscreteMatrix{Matrix::Identity(2, 2)};
  c.space = latent::Discrete{{0.5, 0.5}};
  c.seed = 11;
  auto out = simulate(c);
  bool saw_equal = false, saw_diff = false;
  for (Index i = 0; i < 4; ++i)
    for (Index k = i + 1; k < 4; ++k) {
      if (out.Z.atom(i) == out.Z.atom(k)) {
        EXPECT_TRUE(out.Y.row(i) == out.Y.row(k));
        saw_equal = true;
      } else {
        Vector a = out.Y.row(i).transpose(), b = out.Y.row(k).transpose();
        const double corr = (a.array() - a.mean()).matrix().dot((b.array() - b.mean()).matrix()) /
                            ((a.array() - a.mean()).matrix().norm() * (b.array() - b.mean()).matrix().norm());
        EXPECT_LE(std::abs(corr), 0.1);
        saw_diff = true;
      }
    }
  EXPECT_TRUE(saw_equal || saw_diff);
}

TEST(Simulate, RejectsEmptyShapes) {
  SimConfig c;
  c.p = 0;
  EXPECT_THROW(simulate(c), InvalidInput);
  c.p = 5;
  c.n = 0;
  EXPECT_THROW(simulate(c), InvalidInput);
  c.n = 5;
  c.sigma = -1.0;
  EXPECT_THROW(simulate(c), InvalidInput);
}

// Field covariance concentrates: (1/p) sum_j X_j(Z_i) X_j(Z_k) ~ f(Z_i, Z_k)
// within 4 / sqrt(p) over 100 pairs.
TEST(Simulate, RbfFieldCovarianceConcentrates) {
  SimConfig c;
  c.n = 100;
  c.p = 2000;
  c.sigma = 0.0;
  c.kernel = kernels::Rbf{1.0};
  c.space = latent::TorusR3{2.0, 1.0};
  c.seed = 5;
  c.compute_features = false;
  auto out = simulate(c);
  Matrix K = kernels::gram(c.kernel, out.Z);
  Matrix emp = out.Y * out.Y.transpose() / static_cast<double>(c.p);
  std::mt19937_64 g(99);
  for (int t = 0; t < 100; ++t) {
    const Index i = static_cast<Index>(g() % 100), k = static_cast<Index>(g() % 100);
    EXPECT_LE(std::abs(emp(i, k) - K(i, k)), 4.0 / std::sqrt(double(c.p)));
  }
}

TEST(ConditionalGram, SigmaZeroAndDiscreteLookup) {
  auto Z = latent::sample(latent::Sphere{3}, 6, 2);
  Matrix K = kernels::gram(kernels::Rbf{1.0}, Z);
  EXPECT_TRUE(conditional_gram_expectation(Z, kernels::Rbf{1.0}, 0.0) == K);

  Matrix F(2, 2);
  F << 2.0, 0.3, 0.3, 1.0;
  Matrix atoms(2, 1);
  atoms << 0, 1;
  latent::LatentSample Zd{atoms, latent::Discrete{{0.5, 0.5}}, 0};
  Matrix expected(2, 2);
  expected << 3.0, 0.3, 0.3, 2.0;
  EXPECT_TRUE(conditional_gram_expectation(Zd, kernels::DiscreteMatrix{F}, 1.0) == expected);
}

TEST(ConditionalGram, EqualsFeatureGramPlusNoise) {
  auto c = experiments::mixture3_config(40, 10, 8);
  auto out = simulate(c);
  ASSERT_TRUE(out.phi_Z.has_value());
  Matrix via_features = *out.phi_Z * out.phi_Z->transpose();
  via_features.diagonal().array() += c.sigma * c.sigma;
  EXPECT_LE((conditional_gram_expectation(out.Z, c.kernel, c.sigma) - via_features).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ConditionalGram, MonteCarloWithinFiveStandardErrors) {
  auto c = experiments::mixture3_config(30, 20000, 4);
  auto out = simulate(c);
  auto rep = lemma3_check(out, conditional_gram_expectation(out.Z, c.kernel, c.sigma));
  EXPECT_GE(rep.frac_within_5, 0.99);
}

// Error at p, 4p, 16p shrinks by about 2 per step; averaging the max-error
// ratio over seeds keeps the check stable.
TEST(ConditionalGram, RootPRate) {
  const std::vector<Index> ps{1000, 4000, 16000};
  std::vector<double> mean_err(ps.size(), 0.0);
  const int seeds = 8;
  for (int s = 0; s < seeds; ++s) {
    SimConfig c;
    c.n = 20;
    c.sigma = 1.0;
    c.kernel = kernels::Rbf{1.0};
    c.space = latent::Sphere{2};
    c.compute_features = false;
    auto Z = latent::sample(c.space, c.n, 700 + s);
    Matrix C = conditional_gram_expectation(Z, c.kernel, c.sigma);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      c.p = ps[k];
      c.seed = 900 + s * 10 + k;
      mean_err[k] += lemma3_check(simulate_given_latents(c, Z), C).max_abs / seeds;
    }
  }
  for (std::size_t k = 1; k < ps.size(); ++k) {
    const double ratio = mean_err[k - 1] / mean_err[k];
    EXPECT_GE(ratio, 1.4);
    EXPECT_LE(ratio, 2.9);
  }
}

TEST(Reproducibility, BitIdentical) {
  for (auto c : {experiments::torus_config(50, 60, 1.0, 12), experiments::mixture3_config(50, 60, 12)}) {
    auto a = simulate(c);
    auto b = simulate(c);
    EXPECT_TRUE(a.Y == b.Y);
    EXPECT_TRUE(a.Z.points == b.Z.points);
    c.seed += 1;
    EXPECT_FALSE(simulate(c).Y == a.Y);
  }
}

// Discrete kernels draw one field value per atom, so permuting Z permutes
// the noiseless rows exactly.
TEST(Exchangeability, PermutedLatentsPermuteRows) {
  auto c = experiments::mixture3_config(12, 50, 21);
  c.sigma = 0.0;
  auto Z = latent::sample(c.space, c.n, 21);
  std::vector<Index> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  latent::LatentSample Zp = Z;
  for (Index i = 0; i < 12; ++i) Zp.points.row(i) = Z.points.row(perm[i]);
  auto a = simulate_given_latents(c, Z);
  auto b = simulate_given_latents(c, Zp);
  for (Index i = 0; i < 12; ++i) EXPECT_TRUE(b.Y.row(i) == a.Y.row(perm[i]));
}

TEST(TrueFeatures, FiniteRankOnly) {
  auto Z = latent::sample(latent::ring_region(), 30, 1);
  EXPECT_FALSE(true_features(kernels::Rbf{1.0}, Z).has_value());
  auto poly = true_features(kernels::Polynomial{1.0, 2}, Z);
  ASSERT_TRUE(poly.has_value());
  EXPECT_LE((*poly * poly->transpose() - kernels::gram(kernels::Polynomial{1.0, 2}, Z)).cwiseAbs().maxCoeff(), 1e-10);
  auto cosine = true_features(kernels::CosineSum{2.0}, Z);
  ASSERT_TRUE(cosine.has_value());
  EXPECT_LE((*cosine * cosine->transpose() - kernels::gram(kernels::CosineSum{2.0}, Z)).cwiseAbs().maxCoeff(), 1e-10);
}
