#include <covsdp/error.hpp>
#include <covsdp/sdp.hpp>
#include <covsdp/synth.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace covsdp;

namespace {

Eigen::MatrixXd two_cliques(int size) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * size, 2 * size);
  a.topLeftCorner(size, size).setOnes();
  a.bottomRightCorner(size, size).setOnes();
  a.diagonal().setZero();
  return a;
}

SolverConfig tight() {
  SolverConfig c;
  c.tol = 1e-7;
  c.max_iter = 20000;
  return c;
}

}  // namespace

TEST(Combine, Arithmetic) {
  const Eigen::MatrixXd a = two_cliques(3);
  const Eigen::MatrixXd k = oracle::random_symmetric(6, 1).cwiseAbs();
  EXPECT_EQ(combine(a, k, 0.0), a);
  EXPECT_EQ(combine(Eigen::MatrixXd::Zero(6, 6), k, 1.0), k);
  const auto m = combine(a, k, 4.0 / 200.0);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(m(i, j), a(i, j) + 0.02 * k(i, j));
  }
  EXPECT_THROW(combine(a, Eigen::MatrixXd::Zero(5, 5), 1.0), DimensionError);
  EXPECT_THROW(combine(a, k, -1.0), ParameterError);
}

TEST(ProjectAffine, FeasiblePointUnchanged) {
  const auto x = oracle::random_feasible(10, 3, 2);
  EXPECT_LT((project_affine(x, 3) - x).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ProjectAffine, ZeroMatrixMatchesKktSolve) {
  const auto p = project_affine(Eigen::MatrixXd::Zero(4, 4), 2);
  EXPECT_LT((p - oracle::affine_projection_kkt(Eigen::MatrixXd::Zero(4, 4), 2)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(p.trace(), 2.0, 1e-14);
}

TEST(ProjectAffine, RandomMatchesKktSolveAndIsIdempotent) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 3 + static_cast<int>(seed % 5);
    const int r = 1 + static_cast<int>(seed % n);
    const auto s = oracle::random_symmetric(n, seed);
    const auto p = project_affine(s, r);
    EXPECT_LT((p - oracle::affine_projection_kkt(s, r)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((p.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_NEAR(p.trace(), r, 1e-12);
    EXPECT_LT((project_affine(p, r) - p).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ProjectPsd, PsdInputUnchanged) {
  const auto x = oracle::random_feasible(12, 3, 5);
  EXPECT_LT((project_psd(x) - x).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ProjectPsd, DiagonalClipping) {
  Eigen::Matrix2d s;
  s << 3, 0, 0, -2;
  Eigen::Matrix2d expected;
  expected << 3, 0, 0, 0;
  EXPECT_LT((project_psd(s) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProjectPsd, MatchesSecondEigensolver) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = oracle::random_symmetric(15 + static_cast<int>(seed), seed);
    const auto p = project_psd(s);
    EXPECT_LT((p - oracle::psd_projection(s)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GE(oracle::eigenvalues_desc(p).minCoeff(), -1e-10);
  }
}

TEST(SolveSdp, CompleteGraphObjectiveIsFixed) {
  const int n = 12;
  const Eigen::MatrixXd m = Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
  for (int r : {1, 3, 5}) {
    const auto sol = solve_sdp(m, r);
    EXPECT_TRUE(check_feasibility(sol.x, r).within(1e-4));
    EXPECT_NEAR(sol.objective, n - r, 1e-4 * n);
  }
}

TEST(SolveSdp, TwoCliquesRecoverPlantedMatrix) {
  const auto a = two_cliques(3);
  const auto best = oracle::best_two_partition(a);
  const Labels planted({0, 0, 0, 1, 1, 1}, 2);
  EXPECT_EQ(best.labels, planted.assignments());
  const auto sol = solve_sdp(a, 2, tight());
  EXPECT_TRUE(sol.converged);
  EXPECT_LT((sol.x - ground_truth_matrix(planted)).norm(), 1e-2);
}

TEST(SolveSdp, FeasibleAndFrobeniusBelowTrace) {
  Eigen::Matrix3d b;
  b << 0.6, 0.1, 0.05, 0.1, 0.5, 0.1, 0.05, 0.1, 0.55;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto z = oracle::random_labels(30 + 5 * static_cast<int>(seed), 3, seed);
    const auto a = sample_sbm(SbmParams(b), z, seed);
    const auto sol = solve_sdp(a, 3);
    const auto rep = check_feasibility(sol.x, 3);
    EXPECT_TRUE(rep.within(1e-4)) << rep.min_eigenvalue << ' ' << rep.min_entry;
    EXPECT_LE(rep.max_row_sum_error, 1e-10);
    EXPECT_LE(rep.trace_error, 1e-10);
    EXPECT_LE(sol.x.squaredNorm(), sol.x.trace() + 1e-8);
    EXPECT_NEAR(sol.objective, a.cwiseProduct(sol.x).sum(), 1e-9);
  }
}

TEST(SolveSdp, ObjectiveAtLeastPlanted) {
  Eigen::Matrix2d b;
  b << 0.7, 0.1, 0.1, 0.7;
  const auto z = oracle::random_labels(40, 2, 3);
  const auto a = sample_sbm(SbmParams(b), z, 3);
  const auto sol = solve_sdp(a, 2, tight());
  EXPECT_GE(sol.objective, a.cwiseProduct(ground_truth_matrix(z)).sum() - 1e-4 * a.norm());
}

TEST(SolveSdp, ScaleEquivariant) {
  const auto z = oracle::random_labels(30, 2, 4);
  Eigen::Matrix2d b;
  b << 0.5, 0.2, 0.2, 0.5;
  const auto a = sample_sbm(SbmParams(b), z, 4);
  const auto x1 = solve_sdp(a, 2).x;
  const auto x2 = solve_sdp(7.5 * a, 2).x;
  EXPECT_LT((x1 - x2).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SolveSdp, RestartsAgree) {
  const auto z = oracle::random_labels(30, 3, 6);
  Eigen::Matrix3d b;
  b << 0.5, 0.2, 0.1, 0.2, 0.5, 0.2, 0.1, 0.2, 0.5;
  const auto a = sample_sbm(SbmParams(b), z, 6);
  const double reference = solve_sdp(a, 3, tight()).objective;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SolverState start;
    start.consensus = oracle::random_feasible(30, 3, 100 + seed);
    for (auto& u : start.duals) u = Eigen::MatrixXd::Zero(30, 30);
    const auto sol = solve_sdp(a, 3, tight(), &start);
    EXPECT_NEAR(sol.objective, reference, 1e-3 * std::abs(reference));
  }
}

TEST(SolveSdp, DeterministicAndWarmStartable) {
  const auto z = oracle::random_labels(25, 2, 8);
  Eigen::Matrix2d b;
  b << 0.6, 0.2, 0.2, 0.6;
  const auto a = sample_sbm(SbmParams(b), z, 8);
  const auto s1 = solve_sdp(a, 2);
  const auto s2 = solve_sdp(a, 2);
  EXPECT_EQ(s1.x, s2.x);
  EXPECT_EQ(s1.iterations, s2.iterations);
  const auto warm = solve_sdp(a, 2, {}, &s1.state);
  EXPECT_LE(warm.iterations, s1.iterations);
}

TEST(SolveSdp, UpperBoundEnforced) {
  const auto z = oracle::random_labels(24, 3, 9);
  Eigen::Matrix3d b;
  b << 0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8;
  const auto a = sample_sbm(SbmParams(b), z, 9);
  SolverConfig c = tight();
  c.enforce_upper_bound = true;
  c.upper_bound = 1.0 / z.m_min();
  const auto sol = solve_sdp(a, 3, c);
  EXPECT_LE(sol.x.maxCoeff(), c.upper_bound + 1e-5);
}

TEST(SolveSdp, NonConvergenceReturnsBestIterate) {
  const auto a = two_cliques(5);
  SolverConfig c;
  c.max_iter = 3;
  c.tol = 1e-12;
  const auto sol = solve_sdp(a, 2, c);
  EXPECT_FALSE(sol.converged);
  EXPECT_EQ(sol.iterations, 3);
  EXPECT_TRUE(sol.x.allFinite());
}

TEST(SolveSdp, EarlyStopIsExactlyFeasible) {
  const auto z = oracle::random_labels(40, 3, 12);
  Eigen::Matrix3d b;
  b << 0.5, 0.2, 0.1, 0.2, 0.5, 0.2, 0.1, 0.2, 0.5;
  const auto a = sample_sbm(SbmParams(b), z, 12);
  for (int iters : {2, 10, 50}) {
    SolverConfig c;
    c.max_iter = iters;
    const auto sol = solve_sdp(a, 3, c);
    const auto rep = check_feasibility(sol.x, 3);
    EXPECT_GE(rep.min_eigenvalue, -1e-9) << iters;
    EXPECT_GE(rep.min_entry, 0.0) << iters;
    EXPECT_LE(rep.max_row_sum_error, 1e-10);
    EXPECT_LE(sol.x.squaredNorm(), sol.x.trace() + 1e-9);
    EXPECT_GE(sol.feasibility_shift, 0.0);
    EXPECT_LE(sol.feasibility_shift, 1.0);
  }
}

TEST(SolveSdp, IterationLog) {
  std::ostringstream log;
  SolverConfig c;
  c.max_iter = 4;
  c.iteration_log = &log;
  solve_sdp(two_cliques(3), 2, c);
  const std::string text = log.str();
  EXPECT_EQ(text.rfind("iteration,objective,primal_residual,dual_residual\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(SolveSdp, InputErrors) {
  EXPECT_THROW(solve_sdp(Eigen::MatrixXd::Zero(3, 4), 1), ParameterError);
  EXPECT_THROW(solve_sdp(oracle::random_symmetric(4, 1), 5), ParameterError);
  EXPECT_THROW(solve_sdp(oracle::random_symmetric(4, 1), 0), ParameterError);
  Eigen::MatrixXd asym = oracle::random_symmetric(4, 1);
  asym(0, 1) += 1.0;
  EXPECT_THROW(solve_sdp(asym, 2), ParameterError);
  Eigen::MatrixXd nan = oracle::random_symmetric(4, 1);
  nan(2, 2) = std::nan("");
  EXPECT_THROW(solve_sdp(nan, 2), ParameterError);
  SolverConfig bad;
  bad.rho = 0.0;
  EXPECT_THROW(solve_sdp(oracle::random_symmetric(4, 1), 2, bad), ParameterError);
}

TEST(FroLessTrace, RandomFeasibleMatrices) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 5 + static_cast<int>(seed % 20);
    const int r = 1 + static_cast<int>(seed % 4);
    const auto x = oracle::random_feasible(n, std::min(r, n), seed);
    EXPECT_LE(x.squaredNorm(), x.trace() + 1e-8);
  }
}
