#pragma once

#include "covsdp/model.hpp"
#include "covsdp/rounding.hpp"
#include "covsdp/sdp.hpp"

#include <optional>
#include <vector>

namespace covsdp {

/// Eigenvalue threshold below which theta_r counts as zero.
inline constexpr double kDegenerateEigenvalue = 1e-10;

struct EigenGap {
  double value = 0.0;
  bool degenerate = false;  // theta_r <= kDegenerateEigenvalue, value forced to 0
};

/// g(X) = (theta_r - theta_{r+1}) / theta_r over descending eigenvalues.
/// Throws ParameterError unless 1 <= r < n.
EigenGap eigen_gap(const ClusteringMatrix& x, int r);

struct TuningGrid {
  // lambda_0 candidates; each solve uses lambda_n = lambda_0 / n.
  std::vector<double> lambdas;
  // Candidate cluster counts, used only by select_lambda_and_r.
  std::vector<int> rs;

  /// `count` values spaced evenly in log10 over [lo, hi].
  static std::vector<double> log_spaced(double lo, double hi, int count);
  /// 15 log-spaced lambda_0 values in [0.01, 100].
  static TuningGrid default_grid();

  /// Throws ParameterError unless lambdas are non-empty, positive and
  /// strictly increasing (rs likewise when present).
  void validate(bool need_rs) const;
};

struct TuningPoint {
  double lambda_0 = 0.0;
  int r = 0;
  double eigen_gap = 0.0;
  bool degenerate = false;
  double objective = 0.0;
  std::optional<double> nmi_vs_truth;
  int iterations = 0;
  bool converged = false;
  bool failed = false;  // the solve threw; excluded from selection
};

struct TuningOptions {
  SolverConfig solver;
  // Reuse the previous lambda's solver state along ascending lambda.
  bool warm_start = true;
  // When set, every grid point is rounded and scored against it.
  const Labels* truth = nullptr;
  RoundingConfig rounding;
};

struct TuningResult {
  double lambda_star = 0.0;
  int r_star = 0;
  std::vector<TuningPoint> report;  // grid order: r outer, lambda inner
  SdpSolution best;                 // solution at the selected point
};

/// Best grid point seen so far. Converged solves outrank non-converged ones;
/// within the same status the larger gap wins and ties keep the earlier point.
/// Gaps closer than `tie_tolerance` are ties; selection uses the solver tol,
/// since the solutions are only accurate to that level.
struct Incumbent {
  double tie_tolerance = 0.0;
  double gap = 0.0;
  bool converged = false;
  bool present = false;

  bool beaten_by(double candidate_gap, bool candidate_converged) const;
};

/// Solves SDP(A + lambda_0/n K) for every lambda_0 in the grid and returns the
/// one with the largest eigen gap; ties go to the smaller lambda_0. A point
/// that hit max_iter is only chosen when no grid point converged. Throws
/// TuningError when every solve fails.
TuningResult select_lambda(const AdjacencyMatrix& a, const KernelMatrix& k, int r, const TuningGrid& grid,
                           const TuningOptions& options = {});

/// Joint search over (lambda_0, r); ties go to the smaller r, then the
/// smaller lambda_0.
TuningResult select_lambda_and_r(const AdjacencyMatrix& a, const KernelMatrix& k, const TuningGrid& grid,
                                 const TuningOptions& options = {});

}  // namespace covsdp
