#include "lms/embed.hpp"
#include "lms/experiments.hpp"
#include "lms/simulate.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lms;
using namespace lms::embed;

namespace {

// Distance between two n x r matrices after the best per-column sign flip.
double sign_aligned_gap(const Matrix& a, const Matrix& b) {
  Matrix flipped = b;
  for (Index k = 0; k < b.cols(); ++k)
    if (a.col(k).dot(b.col(k)) < 0) flipped.col(k) *= -1.0;
  return (a - flipped).norm();
}

// p^{-1/2} Y V from Eigen's own SVD, independent of the library's solver.
Matrix svd_reference_scores(const Matrix& Y, Index r) {
  Eigen::JacobiSVD<Matrix> svd(Y, Eigen::ComputeThinV);
  return Y * svd.matrixV().leftCols(r) / std::sqrt(double(Y.cols()));
}

}  // namespace

TEST(PcScores, OrthogonalRowsByHand) {
  const Index p = 6;
  Matrix Y = Matrix::Zero(2, p);
  Y(0, 0) = 2.0;
  Y(1, 3) = 1.0;
  auto e = pc_scores(Y, 2);
  // Rows recovered up to an orthogonal transform: the score Gram equals YY^T.
  EXPECT_LE((e.scores * e.scores.transpose() - Y * Y.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(e.eigenvalues(0), 4.0 / (2.0 * p), 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), 1.0 / (2.0 * p), 1e-14);
}

TEST(PcScores, ZeroMatrixIsRankDeficient) {
  EXPECT_THROW(pc_scores(Matrix::Zero(5, 4), 2), NumericalError);
}

TEST(PcScores, RankBelowRIsReported) {
  Matrix Y = oracle::uniform_matrix(10, 1, 3) * oracle::uniform_matrix(1, 8, 4);
  auto e = pc_scores(Y, 3);
  EXPECT_TRUE(e.rank_deficient());
  EXPECT_EQ(e.numerical_rank, 1);
  EXPECT_EQ(e.scores.cols(), 3);
}

TEST(PcScores, RangeErrors) {
  Matrix Y = oracle::uniform_matrix(4, 6, 1);
  EXPECT_THROW(pc_scores(Y, 0), InvalidInput);
  EXPECT_THROW(pc_scores(Y, 5), InvalidInput);
}

TEST(PcScores, GramAndCovarianceRoutesAgree) {
  for (auto [n, p] : {std::pair<Index, Index>{50, 80}, {80, 50}, {40, 40}}) {
    Matrix Y = oracle::uniform_matrix(n, p, static_cast<std::uint64_t>(n * 1000 + p));
    const Index r = 10;
    Matrix gram = gram_route_scores(Y, r);
    Matrix cov = covariance_route_scores(Y, r) / std::sqrt(double(p));
    EXPECT_LE(sign_aligned_gap(cov, gram), 1e-8) << n << "x" << p;
    EXPECT_LE(sign_aligned_gap(svd_reference_scores(Y, r), gram), 1e-8) << n << "x" << p;
    auto e = pc_scores(Y, r);
    EXPECT_LE(sign_aligned_gap(e.scaled_scores(), gram), 1e-8) << n << "x" << p;
  }
}

TEST(PcScores, ScreeMatchesCovarianceEigenvalues) {
  Matrix Y = oracle::uniform_matrix(30, 12, 8);
  Vector expected = Eigen::SelfAdjointEigenSolver<Matrix>(Y.transpose() * Y / (30.0 * 12.0)).eigenvalues().reverse();
  EXPECT_LE((scree(Y, 12) - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((pc_scores(Y, 5).eigenvalues - expected.head(5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PcScores, CenteredSubtractsMeanRow) {
  Matrix Y = oracle::uniform_matrix(20, 7, 2).array() + 3.0;
  Matrix C = center_rows(Y);
  EXPECT_LE(C.colwise().mean().cwiseAbs().maxCoeff(), 1e-14);
  auto a = pc_scores(Y, 3, true);
  auto b = pc_scores(C, 3, false);
  EXPECT_TRUE(a.centered);
  EXPECT_LE(sign_aligned_gap(a.scores, b.scores), 1e-10);
}

TEST(PcScores, OrthogonalInvarianceOfGeometry) {
  Matrix Y = oracle::uniform_matrix(25, 30, 17);
  Matrix R = oracle::random_orthogonal(30, 18);
  auto a = pc_scores(Y, 5);
  auto b = pc_scores(Y * R, 5);
  EXPECT_LE((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff(), 1e-9);
  Matrix Da = oracle::distances(a.scores), Db = oracle::distances(b.scores);
  EXPECT_LE((Da - Db).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Align, ExactRotationGivesZeroError) {
  Matrix Y = oracle::uniform_matrix(30, 40, 5);
  auto e = pc_scores(Y, 4);
  Matrix targets = e.scaled_scores() * oracle::random_orthogonal(4, 6);
  auto rep = align(e, targets);
  EXPECT_LE(rep.uniform_error, 1e-9);
  EXPECT_LE(rep.pairwise_error, 1e-9);
  EXPECT_LE((rep.Q.transpose() * rep.Q - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Align, ShapeMismatch) {
  auto e = pc_scores(oracle::uniform_matrix(10, 12, 1), 3);
  EXPECT_THROW(align(e, Matrix::Zero(10, 2)), InvalidInput);
}

TEST(Align, PairwiseAtMostTwiceUniform) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto c = experiments::mixture3_config(60, 300, seed);
    auto out = sim::simulate(c);
    auto rep = align(pc_scores(out.Y, 3), *out.phi_Z);
    EXPECT_LE(rep.pairwise_error, 2.0 * rep.uniform_error + 1e-9);
  }
}

// Averaged over seeds the uniform error shrinks as p grows.
TEST(Align, UniformErrorDecreasesWithP) {
  auto mean_error = [](Index p) {
    double s = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto out = sim::simulate(experiments::mixture3_config(200, p, seed));
      s += align(pc_scores(out.Y, 3), *out.phi_Z).uniform_error;
    }
    return s / 20.0;
  };
  EXPECT_LT(mean_error(15000), mean_error(200));
}

TEST(CenteredKernel, ConstantKernelVanishes) {
  auto Z = latent::sample(latent::Sphere{2}, 7, 3);
  // a series with only a constant term
  kernels::KernelSpec constant = kernels::InnerProductAnalytic{{2.5}};
  EXPECT_NEAR(centered_kernel(constant, Z, Z.points.row(0).transpose(), Z.points.row(3).transpose()), 0.0, 1e-15);
  EXPECT_LE(centered_kernel_matrix(constant, Z).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CenteredKernel, TwoAtomHandValue) {
  Matrix F(2, 2);
  F << 2.0, 0.5, 0.5, 1.0;
  Matrix atoms(2, 1);
  atoms << 0, 1;
  latent::LatentSample Z{atoms, latent::Discrete{{0.5, 0.5}}, 0};
  const double F11 = 2.0, F12 = 0.5, F22 = 1.0;
  const double expected = F11 - 2.0 * (F11 + F12) / 2.0 + (F11 + 2.0 * F12 + F22) / 4.0;
  EXPECT_DOUBLE_EQ(expected, 0.5);
  EXPECT_NEAR(centered_kernel(kernels::DiscreteMatrix{F}, Z, Vector::Constant(1, 0.0), Vector::Constant(1, 0.0)),
              expected, 1e-15);
  Matrix K = kernels::gram(kernels::DiscreteMatrix{F}, Z);
  EXPECT_NEAR(double_center(K)(0, 0), expected, 1e-15);
}

TEST(CenteredKernel, MatrixIdentityThreeFamilies) {
  auto Z = latent::sample(latent::ring_region(), 30, 9);
  for (const kernels::KernelSpec& spec :
       {kernels::KernelSpec{kernels::Rbf{1.0}}, kernels::KernelSpec{kernels::Polynomial{1.0, 2}},
        kernels::KernelSpec{kernels::CosineSum{2.0}}}) {
    Matrix K = kernels::gram(spec, Z);
    const double n = 30.0;
    Matrix C = Matrix::Identity(30, 30) - Matrix::Ones(30, 30) / n;
    EXPECT_LE((centered_kernel_matrix(spec, Z) - C * K * C).cwiseAbs().maxCoeff(), 1e-12);
  }
}

// The centering terms depend on z or z' alone, so the mixed partials of the
// centered kernel equal those of the kernel.
TEST(CenteredKernel, MetricUnchanged) {
  auto Z = latent::sample(latent::ring_region(), 25, 4);
  const kernels::KernelSpec spec = kernels::Rbf{1.0};
  Matrix pts = oracle::uniform_matrix(5, 2, 10);
  const double h = 1e-4;
  for (Index t = 0; t < 5; ++t) {
    Vector xi = pts.row(t).transpose();
    Matrix H(2, 2);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) {
        Vector zp = xi, zm = xi, wp = xi, wm = xi;
        zp(i) += h;
        zm(i) -= h;
        wp(j) += h;
        wm(j) -= h;
        H(i, j) = (centered_kernel(spec, Z, zp, wp) - centered_kernel(spec, Z, zp, wm) -
                   centered_kernel(spec, Z, zm, wp) + centered_kernel(spec, Z, zm, wm)) /
                  (4 * h * h);
      }
    EXPECT_LE(oracle::rel_max_error(H, kernels::riemannian_metric(spec, xi).H), 1e-5);
  }
}
