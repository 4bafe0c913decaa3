#pragma once

#include "covsdp/model.hpp"

#include <array>
#include <iosfwd>

namespace covsdp {

struct SolverConfig {
  double rho = 1.0;
  int max_iter = 2000;
  double tol = 1e-4;
  // Entrywise cap X <= upper_bound (normally 1/m_min). Off by default.
  bool enforce_upper_bound = false;
  double upper_bound = 1.0;
  // When set, one CSV line "iteration,objective,primal_residual,dual_residual"
  // is written per iteration after a header line.
  std::ostream* iteration_log = nullptr;

  void validate() const;
};

/// Consensus and scaled dual variables, reusable as a warm start.
struct SolverState {
  Eigen::MatrixXd consensus;
  std::array<Eigen::MatrixXd, 3> duals;
};

struct SdpSolution {
  ClusteringMatrix x;
  double objective = 0.0;  // <M, x>
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // Weight theta of the final pull toward the interior point (see solve_sdp).
  double feasibility_shift = 0.0;
  SolverState state;
};

/// M = A + lambda_n K. Throws DimensionError on shape mismatch and
/// ParameterError for negative lambda_n.
Eigen::MatrixXd combine(const AdjacencyMatrix& a, const KernelMatrix& k, double lambda_n);

/// Frobenius projection onto {X symmetric : X 1 = 1, trace X = r}.
/// The correction has the closed form a 1^T + 1 a^T + c I.
Eigen::MatrixXd project_affine(const Eigen::MatrixXd& s, int r);

/// Frobenius projection onto the PSD cone (negative eigenvalues clipped to 0).
/// Throws NumericalError if the eigensolver fails.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s);

/// Maximizes <M, X> over {X PSD, X >= 0, X 1 = 1, trace X = r}, optionally
/// with X <= upper_bound.
///
/// Three-block consensus ADMM: each block carries one third of the linear
/// objective plus the indicator of one set (affine, PSD cone, orthant), so
/// every block update is a closed-form projection. M is first reduced to its
/// component along the affine set's direction space (the rest is constant on
/// the feasible set) and divided by that component's Frobenius norm, which
/// makes the iterates invariant to positive scaling of M and to adding
/// multiples of 1 1^T or I, and sets the scale that rho and tol refer to. Iteration stops
/// when max(primal, dual) <= tol with
///   primal = sqrt(sum_b ||X_b - Z||_F^2),  dual = rho sqrt(3) ||Z - Z_prev||_F.
/// The returned matrix is the block average, symmetrized, then projected on
/// the affine set so that row sums and trace hold exactly. Leftover negative
/// eigenvalues or entries (of order tol) are then removed by the smallest
/// convex step theta toward the interior point
///   C = (r-1)/(n-1) I + (n-r)/(n(n-1)) 1 1^T,
/// which leaves the eigenvectors, and hence the rounding, unchanged.
///
/// On non-convergence the iterate with the smallest residual is returned with
/// converged = false. Throws ParameterError for non-square, non-finite or
/// non-symmetric M, or r outside [1, n].
SdpSolution solve_sdp(const Eigen::MatrixXd& m, int r, const SolverConfig& config = {},
                      const SolverState* warm_start = nullptr);

struct FeasibilityReport {
  double min_eigenvalue = 0.0;
  double min_entry = 0.0;
  double max_row_sum_error = 0.0;
  double trace_error = 0.0;

  bool within(double tol) const {
    return min_eigenvalue >= -tol && min_entry >= -tol && max_row_sum_error <= tol && trace_error <= tol;
  }
};

FeasibilityReport check_feasibility(const ClusteringMatrix& x, int r);

}  // namespace covsdp
