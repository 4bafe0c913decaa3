#include <covsdp/covariates.hpp>
#include <covsdp/error.hpp>
#include <covsdp/synth.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace covsdp;

namespace {

Eigen::MatrixXd gaussian_points(int n, int d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd y(n, d);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) y(i, c) = normal(gen);
  }
  return y;
}

}  // namespace

TEST(Kernel, IdenticalPointsAndZeroScale) {
  Eigen::MatrixXd y(3, 2);
  y << 1, 2, 1, 2, 0, 5;
  const auto k = gaussian_kernel(y, 0.7);
  EXPECT_DOUBLE_EQ(k(0, 1), 1.0);
  EXPECT_TRUE(gaussian_kernel(y, 0.0).isApprox(Eigen::MatrixXd::Ones(3, 3)));
  EXPECT_THROW(gaussian_kernel(y, -1.0), ParameterError);
}

TEST(Kernel, HalfAtLogTwoOverEta) {
  const double eta = 0.3;
  Eigen::MatrixXd y(2, 1);
  y << 0.0, std::sqrt(std::log(2.0) / eta);
  EXPECT_NEAR(gaussian_kernel(y, eta)(0, 1), 0.5, 1e-14);
}

TEST(Kernel, PsdSymmetricUnitDiagonal) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto y = gaussian_points(60, 3, seed);
    const auto k = gaussian_kernel(y, 0.5);
    EXPECT_EQ(k, k.transpose());
    EXPECT_TRUE((k.diagonal().array() == 1.0).all());
    EXPECT_GT(k.minCoeff(), 0.0);
    EXPECT_GE(oracle::eigenvalues_desc(k).minCoeff(), -1e-8 * 60);
  }
}

TEST(Kernel, MonotoneInScale) {
  const auto y = gaussian_points(20, 2, 4);
  const auto k1 = gaussian_kernel(y, 0.2);
  const auto k2 = gaussian_kernel(y, 0.9);
  EXPECT_TRUE((k2.array() <= k1.array()).all());
}

TEST(Quantile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile({3.0, 1.0, 2.0, 4.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({5.0}, 0.3), 5.0);
  EXPECT_DOUBLE_EQ(quantile({1.0, 2.0}, 1.0), 2.0);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(1 + t * 7);
    for (double& x : v) x = u(gen);
    const double p = u(gen);
    EXPECT_DOUBLE_EQ(quantile(v, p), oracle::quantile(v, p));
  }
}

TEST(ChiSquare, MedianOfTwoDegrees) {
  EXPECT_NEAR(chi_square_quantile(0.5, 2), 2.0 * std::log(2.0), 1e-8);
}

TEST(ChiSquare, MatchesNumericIntegration) {
  EXPECT_NEAR(chi_square_quantile(0.95, 1), oracle::chi_square_quantile(0.95, 1), 1e-3);
  EXPECT_NEAR(chi_square_quantile(0.95, 1), 3.8415, 1e-3);
  EXPECT_NEAR(chi_square_quantile(0.95, 6), oracle::chi_square_quantile(0.95, 6), 1e-3);
  EXPECT_NEAR(chi_square_quantile(0.95, 6), 12.592, 1e-3);
  for (int d : {1, 2, 3, 9, 30}) {
    for (double p : {0.05, 0.5, 0.95}) EXPECT_NEAR(oracle::chi_square_cdf(chi_square_quantile(p, d), d), p, 1e-6);
  }
}

TEST(ChiSquare, RejectsBadArguments) {
  EXPECT_THROW(chi_square_quantile(0.0, 2), ParameterError);
  EXPECT_THROW(chi_square_quantile(1.0, 2), ParameterError);
  EXPECT_THROW(chi_square_quantile(0.5, 0), ParameterError);
}

TEST(Bandwidth, MatchesHandRolledHeuristic) {
  const auto y = gaussian_points(100, 2, 12);
  EXPECT_NEAR(tune_bandwidth(y, 2), oracle::bandwidth_eta(y, 2), 1e-6 * oracle::bandwidth_eta(y, 2));
}

TEST(Bandwidth, ScalesInverseQuadratically) {
  const auto y = gaussian_points(80, 3, 2);
  const double c = 3.5;
  EXPECT_NEAR(tune_bandwidth(c * y, 3), tune_bandwidth(y, 3) / (c * c), 1e-12);
}

TEST(Bandwidth, IdenticalPointsAreDegenerate) {
  EXPECT_THROW(tune_bandwidth(Eigen::MatrixXd::Ones(10, 2), 2), DegenerateData);
}

TEST(Pca, SplitSize) {
  EXPECT_EQ(pca_split_size(800), 119);
  EXPECT_EQ(pca_split_size(4), 2);
}

TEST(Pca, PreconditionErrors) {
  const auto y = gaussian_points(20, 2, 1);
  EXPECT_THROW(split_sample_pca(y, 4, 0), DimensionError);
  EXPECT_THROW(split_sample_pca(y, 1, 0), ParameterError);
  EXPECT_THROW(split_sample_pca(gaussian_points(3, 2, 1), 2, 0), ParameterError);
}

TEST(Pca, SplitIsPartitionAndDeterministic) {
  const auto y = gaussian_points(50, 6, 3);
  const auto a = split_sample_pca(y, 3, 17);
  const auto b = split_sample_pca(y, 3, 17);
  EXPECT_EQ(a.p1, b.p1);
  EXPECT_EQ(a.projected, b.projected);
  std::vector<int> all = a.p1;
  all.insert(all.end(), a.p2.begin(), a.p2.end());
  std::sort(all.begin(), all.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(all[i], i);
  EXPECT_EQ(static_cast<int>(a.p1.size()), pca_split_size(50));
  EXPECT_EQ(a.projected.rows(), static_cast<Eigen::Index>(a.p2.size()));
  EXPECT_EQ(a.projected.cols(), 2);
  EXPECT_TRUE((a.basis.transpose() * a.basis).isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-12));
}

TEST(Pca, NoiselessMeansKeepTheirDistances) {
  Eigen::VectorXd m0 = Eigen::VectorXd::Zero(10);
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(10);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(10);
  m0(0) = 5;
  m1(1) = 5;
  m2(0) = -2;
  m2(1) = -3;
  const MixtureParams params({m0, m1, m2}, {0.0, 0.0, 0.0});
  const auto z = oracle::random_labels(60, 3, 8);
  const auto y = sample_mixture(params, z, 1);
  const auto split = split_sample_pca(y, 3, 4);
  const auto proj = project_rows(y, split.basis);
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 60; ++j) {
      EXPECT_NEAR((proj.row(i) - proj.row(j)).norm(), (y.row(i) - y.row(j)).norm(), 1e-8);
    }
  }
}

TEST(Pca, ProjectedSphericalNoiseStaysIsotropic) {
  const int d = 30;
  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd mu1 = Eigen::VectorXd::Zero(d);
  mu1(0) = 12.0;
  const MixtureParams params({mu0, mu1}, {1.0, 1.0});
  const std::vector<int> sizes{1000, 1000};
  const auto z = Labels::from_sizes(sizes);
  const auto y = sample_mixture(params, z, 6);
  const auto split = split_sample_pca(y, 2, 6);
  // Variance of the projected points of cluster 0 that landed in P2.
  std::vector<double> vals;
  for (std::size_t t = 0; t < split.p2.size(); ++t) {
    if (z[split.p2[t]] == 0) vals.push_back(split.projected(static_cast<Eigen::Index>(t), 0));
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= vals.size();
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= vals.size();
  EXPECT_NEAR(var, 1.0, 0.15);
}

TEST(Standardize, MeanZeroUnitSd) {
  auto y = gaussian_points(40, 3, 9);
  y.col(1) = 5.0 * y.col(1).array() + 3.0;
  y.col(2).setConstant(4.0);
  const auto s = standardize_columns(y);
  for (int c = 0; c < 2; ++c) {
    EXPECT_NEAR(s.col(c).mean(), 0.0, 1e-12);
    EXPECT_NEAR(s.col(c).squaredNorm() / 40.0, 1.0, 1e-10);
  }
  EXPECT_TRUE(s.col(2).isZero());
}
