#include <covsdp/error.hpp>
#include <covsdp/model.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace covsdp;

TEST(Labels, ValidatesIndicesAndEmptyClusters) {
  EXPECT_THROW(Labels({0, 2, 1}, 2), InvalidLabels);
  EXPECT_THROW(Labels({0, 0, 0}, 2), InvalidLabels);
  EXPECT_THROW(Labels({0, -1}, 2), InvalidLabels);
  EXPECT_THROW(Labels({}, 1), InvalidLabels);
  const Labels z({0, 1, 1, 2, 2, 2}, 3);
  EXPECT_EQ(z.n(), 6);
  EXPECT_EQ(z.sizes(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(z.m_min(), 1);
  EXPECT_EQ(z.m_max(), 3);
  EXPECT_DOUBLE_EQ(z.alpha(), 3.0);
  EXPECT_EQ(z.members(1), (std::vector<int>{1, 2}));
}

TEST(Labels, FromSizesAndCanonical) {
  const std::vector<int> sizes{2, 3};
  EXPECT_EQ(Labels::from_sizes(sizes).assignments(), (std::vector<int>{0, 0, 1, 1, 1}));
  EXPECT_EQ(Labels({2, 0, 2, 1}, 3).canonical().assignments(), (std::vector<int>{0, 1, 0, 2}));
  EXPECT_EQ(Labels::from_assignments({1, 0, 1}).r(), 2);
}

TEST(GroundTruth, SingleClusterIsUniform) {
  const auto x = ground_truth_matrix(Labels({0, 0, 0}, 1));
  EXPECT_TRUE(x.isApprox(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0)));
  EXPECT_NEAR(x.trace(), 1.0, 1e-15);
}

TEST(GroundTruth, TwoBlocks) {
  const auto x = ground_truth_matrix(Labels({0, 0, 1, 1, 1}, 2));
  EXPECT_DOUBLE_EQ(x(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(x(2, 4), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(x(0, 3), 0.0);
  EXPECT_NEAR(x.squaredNorm(), 2.0, 1e-12);
}

TEST(GroundTruth, SpectrumIsRUnitEigenvalues) {
  const auto z = oracle::random_labels(50, 4, 11);
  const auto ev = oracle::eigenvalues_desc(ground_truth_matrix(z));
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(ev(i), i < 4 ? 1.0 : 0.0, 1e-10);
}

TEST(GroundTruth, InvariantsOnRandomLabels) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int r = 1 + static_cast<int>(seed % 6);
    const auto z = oracle::random_labels(30 + static_cast<int>(seed), r, seed);
    const auto x = ground_truth_matrix(z);
    EXPECT_LT((x - x.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((x * x - x).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((x.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
    EXPECT_NEAR(x.squaredNorm(), r, 1e-10);
  }
}

TEST(SbmParams, Validation) {
  EXPECT_THROW(SbmParams(Eigen::MatrixXd::Constant(2, 3, 0.1)), ParameterError);
  Eigen::MatrixXd asym(2, 2);
  asym << 0.1, 0.2, 0.3, 0.1;
  EXPECT_THROW(SbmParams{asym}, ParameterError);
  EXPECT_THROW(SbmParams(Eigen::MatrixXd::Constant(2, 2, 1.5)), ParameterError);
  Eigen::MatrixXd b(2, 2);
  b << 0.3, 0.1, 0.1, 0.2;
  const SbmParams p(b);
  EXPECT_TRUE(p.within_rescaled(10).isApprox(Eigen::Vector2d(3.0, 2.0)));
  EXPECT_TRUE(p.across_rescaled(10).isApprox(Eigen::Vector2d(1.0, 1.0)));
  const auto e = p.expected_adjacency(Labels({0, 1, 1}, 2));
  EXPECT_DOUBLE_EQ(e(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(e(1, 2), 0.2);
  EXPECT_DOUBLE_EQ(e(0, 2), 0.1);
}

TEST(MixtureParams, DistancesAndDefaults) {
  const MixtureParams m({Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 4), Eigen::Vector2d(0, 1)}, {1.0, 2.0, 0.5});
  EXPECT_EQ(m.d(), 2);
  EXPECT_DOUBLE_EQ(m.distance(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(m.d_min(), 1.0);
  EXPECT_EQ(m.psis(), m.sigmas());
  EXPECT_DOUBLE_EQ(m.psi_max(), 2.0);
  EXPECT_THROW(MixtureParams({Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0)}, {1.0, 1.0}), ParameterError);
  EXPECT_THROW(MixtureParams({Eigen::Vector2d(0, 0)}, {-1.0}), ParameterError);
}

TEST(Assortativity, TenClusterModelIsStrong) {
  const SbmParams b(0.046 * Eigen::MatrixXd::Identity(10, 10) + 0.004 * Eigen::MatrixXd::Ones(10, 10));
  EXPECT_EQ(classify_assortativity(b), Assortativity::kStrong);
}

TEST(Assortativity, SimulationOneIsWeakNotStrong) {
  Eigen::Matrix3d b;
  b << 1.6, 1.2, 0.16, 1.2, 1.6, 0.02, 0.16, 0.02, 1.2;
  EXPECT_EQ(classify_assortativity(SbmParams(0.01 * b)), Assortativity::kWeak);
}

TEST(Assortativity, DisassortativeIsNone) {
  Eigen::Matrix2d b;
  b << 0.1, 0.2, 0.2, 0.1;
  EXPECT_EQ(classify_assortativity(SbmParams(b)), Assortativity::kNone);
  EXPECT_STREQ(to_string(Assortativity::kNone), "none");
}

TEST(Assortativity, StrongImpliesWeakPredicate) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Eigen::MatrixXd s = oracle::random_symmetric(4, seed).cwiseAbs();
    s /= s.maxCoeff();
    const SbmParams b(s);
    if (classify_assortativity(b) != Assortativity::kStrong) continue;
    for (int k = 0; k < 4; ++k) {
      for (int l = 0; l < 4; ++l) {
        if (k != l) EXPECT_GT(s(k, k), s(k, l));
      }
    }
  }
}

TEST(EdgeVariance, ConstantProbability) {
  const std::vector<int> sizes{40, 60};
  EXPECT_NEAR(average_edge_variance(SbmParams(Eigen::MatrixXd::Constant(2, 2, 0.1)), Labels::from_sizes(sizes)), 9.0,
              1e-12);
  EXPECT_DOUBLE_EQ(average_edge_variance(SbmParams(Eigen::MatrixXd::Zero(2, 2)), Labels::from_sizes(sizes)), 0.0);
}

TEST(EdgeVariance, SimulationOneMatchesDoubleSum) {
  Eigen::Matrix3d b;
  b << 1.6, 1.2, 0.16, 1.2, 1.6, 0.02, 0.16, 0.02, 1.2;
  const SbmParams p(0.01 * b);
  const std::vector<int> sizes{60, 80, 100};
  const auto z = Labels::from_sizes(sizes);
  double total = 0.0;
  for (int i = 0; i < z.n(); ++i) {
    for (int j = i + 1; j < z.n(); ++j) {
      const double q = p(z[i], z[j]);
      total += q * (1.0 - q);
    }
  }
  EXPECT_NEAR(average_edge_variance(p, z), 2.0 * total / (z.n() - 1), 1e-10);
}

TEST(EdgeVariance, InvariantUnderClusterRelabeling) {
  Eigen::Matrix3d b;
  b << 0.5, 0.1, 0.2, 0.1, 0.3, 0.05, 0.2, 0.05, 0.4;
  const auto z = oracle::random_labels(40, 3, 5);
  const std::vector<int> perm{2, 0, 1};
  Eigen::Matrix3d bp;
  std::vector<int> zp(40);
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) bp(perm[k], perm[l]) = b(k, l);
  }
  for (int i = 0; i < 40; ++i) zp[i] = perm[z[i]];
  EXPECT_NEAR(average_edge_variance(SbmParams(b), z), average_edge_variance(SbmParams(bp), Labels(zp, 3)), 1e-12);
}
