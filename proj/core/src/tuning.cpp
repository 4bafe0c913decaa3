#include "covsdp/tuning.hpp"

#include "covsdp/error.hpp"
#include "covsdp/metrics.hpp"
#include "linalg.hpp"

#include <cmath>

namespace covsdp {

EigenGap eigen_gap(const ClusteringMatrix& x, int r) {
  const auto n = static_cast<int>(x.rows());
  if (r < 1 || r >= n) throw ParameterError("eigen gap needs 1 <= r < n");
  const Eigen::VectorXd top = detail::top_eigenpairs(0.5 * (x + x.transpose()), r + 1).values;
  const double theta_r = top(r - 1);
  const double theta_next = top(r);
  if (theta_r <= kDegenerateEigenvalue) return {0.0, true};
  return {(theta_r - theta_next) / theta_r, false};
}

std::vector<double> TuningGrid::log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi >= lo) || count < 1) throw ParameterError("log grid needs 0 < lo <= hi and count >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = count == 1 ? lo : std::pow(10.0, a + (b - a) * i / (count - 1));
  }
  return out;
}

TuningGrid TuningGrid::default_grid() { return {log_spaced(0.01, 100.0, 15), {}}; }

void TuningGrid::validate(bool need_rs) const {
  if (lambdas.empty()) throw ParameterError("tuning grid has no lambda values");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) throw ParameterError("lambda values must be positive");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw ParameterError("lambda values must be strictly increasing");
  }
  if (need_rs && rs.empty()) throw ParameterError("tuning grid has no candidate cluster counts");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] < 1) throw ParameterError("candidate cluster counts must be positive");
    if (i > 0 && !(rs[i] > rs[i - 1])) throw ParameterError("candidate cluster counts must be strictly increasing");
  }
}

bool Incumbent::beaten_by(double candidate_gap, bool candidate_converged) const {
  if (!present) return true;
  if (candidate_converged != converged) return candidate_converged;
  return candidate_gap > gap + tie_tolerance;
}

namespace {

// Runs the lambda sweep for one r, appending to `result` and updating the
// incumbent when the candidate ranks strictly higher.
void sweep(const AdjacencyMatrix& a, const KernelMatrix& k, int r, const TuningGrid& grid,
           const TuningOptions& options, TuningResult& result, Incumbent& best) {
  const double n = static_cast<double>(a.rows());
  SolverState state;
  bool have_state = false;
  for (double lambda_0 : grid.lambdas) {
    TuningPoint point;
    point.lambda_0 = lambda_0;
    point.r = r;
    try {
      const Eigen::MatrixXd m = combine(a, k, lambda_0 / n);
      SdpSolution sol = solve_sdp(m, r, options.solver, options.warm_start && have_state ? &state : nullptr);
      if (!sol.x.allFinite()) throw NumericalError("non-finite solution");
      const EigenGap gap = eigen_gap(sol.x, r);
      point.eigen_gap = gap.value;
      point.degenerate = gap.degenerate;
      point.objective = sol.objective;
      point.iterations = sol.iterations;
      point.converged = sol.converged;
      if (options.truth != nullptr) {
        point.nmi_vs_truth = nmi(spectral_round(sol.x, r, options.rounding), *options.truth);
      }
      if (options.warm_start) {
        state = sol.state;
        have_state = true;
      }
      if (best.beaten_by(gap.value, sol.converged)) {
        best = {best.tie_tolerance, gap.value, sol.converged, true};
        result.lambda_star = lambda_0;
        result.r_star = r;
        result.best = std::move(sol);
      }
    } catch (const Error&) {
      point.failed = true;
    }
    result.report.push_back(point);
  }
}

}  // namespace

TuningResult select_lambda(const AdjacencyMatrix& a, const KernelMatrix& k, int r, const TuningGrid& grid,
                           const TuningOptions& options) {
  grid.validate(false);
  if (a.rows() != k.rows()) throw DimensionError("A and K must be the same size");
  TuningResult result;
  Incumbent best{options.solver.tol};
  sweep(a, k, r, grid, options, result, best);
  if (!best.present) throw TuningError("every grid point failed to solve");
  return result;
}

TuningResult select_lambda_and_r(const AdjacencyMatrix& a, const KernelMatrix& k, const TuningGrid& grid,
                                 const TuningOptions& options) {
  grid.validate(true);
  if (a.rows() != k.rows()) throw DimensionError("A and K must be the same size");
  TuningResult result;
  Incumbent best{options.solver.tol};
  for (int r : grid.rs) sweep(a, k, r, grid, options, result, best);
  if (!best.present) throw TuningError("every grid point failed to solve");
  return result;
}

}  // namespace covsdp
