#include "covsdp/sdp.hpp"

#include "covsdp/error.hpp"
#include "linalg.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace covsdp {

void SolverConfig::validate() const {
  if (!(rho > 0.0)) throw ParameterError("solver rho must be positive");
  if (!(tol > 0.0)) throw ParameterError("solver tol must be positive");
  if (max_iter < 1) throw ParameterError("solver max_iter must be >= 1");
  if (enforce_upper_bound && !(upper_bound > 0.0)) throw ParameterError("upper bound must be positive");
}

Eigen::MatrixXd combine(const AdjacencyMatrix& a, const KernelMatrix& k, double lambda_n) {
  if (a.rows() != a.cols() || k.rows() != k.cols() || a.rows() != k.rows()) {
    throw DimensionError("A and K must be square matrices of the same size");
  }
  if (!(lambda_n >= 0.0) || !std::isfinite(lambda_n)) throw ParameterError("lambda_n must be finite and >= 0");
  return a + lambda_n * k;
}

Eigen::MatrixXd project_affine(const Eigen::MatrixXd& s, int r) {
  const auto n = s.rows();
  if (n == 1) return Eigen::MatrixXd::Constant(1, 1, 1.0);
  const Eigen::VectorXd rows = s.rowwise().sum();
  const double total = rows.sum();
  const double trace = s.trace();
  const double nd = static_cast<double>(n);
  // Solve for sigma = 1^T a and c from the row-sum and trace conditions.
  const double sigma = (nd - total - r + trace) / (2.0 * (nd - 1.0));
  const double c = (r - trace - 2.0 * sigma) / nd;
  const Eigen::VectorXd a = (Eigen::VectorXd::Ones(n) - rows - Eigen::VectorXd::Constant(n, sigma + c)) / nd;
  Eigen::MatrixXd out = s;
  out.colwise() += a;
  out.rowwise() += a.transpose();
  out.diagonal().array() += c;
  return out;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s) {
  int hint = static_cast<int>(s.rows()) / 2;
  return detail::psd_part(s, hint);
}

namespace {

void validate_objective(const Eigen::MatrixXd& m, int r) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw ParameterError("objective matrix must be square and non-empty");
  if (!m.allFinite()) throw ParameterError("objective matrix must be finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ParameterError("objective matrix must be symmetric");
  }
  if (r < 1 || r > m.rows()) throw ParameterError("cluster count must lie in [1, n]");
}

// (r-1)/(n-1) I + (n-r)/(n(n-1)) E: symmetric, PSD, nonnegative, rows sum to 1, trace r.
Eigen::MatrixXd feasible_start(Eigen::Index n, int r) {
  if (n == 1) return Eigen::MatrixXd::Constant(1, 1, 1.0);
  const double nd = static_cast<double>(n);
  const double off = (nd - r) / (nd * (nd - 1.0));
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(n, n, off);
  x.diagonal().array() += (r - 1.0) / (nd - 1.0);
  return x;
}

// Smallest theta in [0, 1] with (1 - theta) x + theta c inside the cone and
// orthant (and below `upper` when finite). x and c share the affine
// constraints, so every convex combination keeps them. c = feasible_start
// acts as a scalar on the complement of 1, where x has all its other
// eigenvalues, so theta leaves the eigenvectors of x unchanged.
double feasibility_shift(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c, int r, double upper) {
  const auto n = x.rows();
  if (n == 1) return 0.0;
  double theta = 0.0;
  const double a = (r - 1.0) / (static_cast<double>(n) - 1.0);
  const double lmin = detail::smallest_eigenvalue(x);
  if (lmin < 0.0) theta = std::max(theta, -lmin / (a - lmin));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = x(i, j);
      if (v < 0.0) theta = std::max(theta, -v / (c(i, j) - v));
      if (v > upper && c(i, j) < upper) theta = std::max(theta, (v - upper) / (v - c(i, j)));
    }
  }
  return std::min(theta, 1.0);
}

}  // namespace

SdpSolution solve_sdp(const Eigen::MatrixXd& m, int r, const SolverConfig& config, const SolverState* warm_start) {
  validate_objective(m, r);
  config.validate();
  const auto n = m.rows();

  // Only the part of M along {X 1 = 0, trace X = 0} changes <M, X> on the
  // feasible set; constant offsets such as c 1 1^T (large in kernel matrices)
  // would otherwise dominate the normalization.
  Eigen::MatrixXd direction = project_affine(m, r) - project_affine(Eigen::MatrixXd::Zero(n, n), r);
  const double norm = direction.norm();
  if (norm > 1e-14 * std::max(1.0, m.norm())) {
    direction /= norm;
  } else {
    direction.setZero();
  }
  const Eigen::MatrixXd step = direction / (3.0 * config.rho);
  const double lower = 0.0;
  const double upper = config.enforce_upper_bound ? config.upper_bound : std::numeric_limits<double>::infinity();

  SolverState st;
  if (warm_start != nullptr && warm_start->consensus.rows() == n && warm_start->consensus.cols() == n) {
    st = *warm_start;
  } else {
    st.consensus = feasible_start(n, r);
    for (auto& u : st.duals) u = Eigen::MatrixXd::Zero(n, n);
  }
  auto& z = st.consensus;
  auto& [u_aff, u_psd, u_pos] = st.duals;

  if (config.iteration_log != nullptr) *config.iteration_log << "iteration,objective,primal_residual,dual_residual\n";

  Eigen::MatrixXd x_aff(n, n), x_psd(n, n), x_pos(n, n), z_prev(n, n);
  int positive_hint = r;
  double best_residual = std::numeric_limits<double>::infinity();
  SdpSolution out;
  Eigen::MatrixXd best_average;

  for (int it = 1; it <= config.max_iter; ++it) {
    x_aff = project_affine(z - u_aff + step, r);
    x_psd = detail::psd_part(z - u_psd + step, positive_hint);
    x_pos = (z - u_pos + step).cwiseMax(lower).cwiseMin(upper);

    z_prev = z;
    z = (x_aff + u_aff + x_psd + u_psd + x_pos + u_pos) / 3.0;
    u_aff += x_aff - z;
    u_psd += x_psd - z;
    u_pos += x_pos - z;

    const double primal =
        std::sqrt((x_aff - z).squaredNorm() + (x_psd - z).squaredNorm() + (x_pos - z).squaredNorm());
    const double dual = config.rho * std::sqrt(3.0) * (z - z_prev).norm();
    const double residual = std::max(primal, dual);

    if (config.iteration_log != nullptr) {
      *config.iteration_log << it << ',' << m.cwiseProduct(z).sum() << ',' << primal << ',' << dual << '\n';
    }
    if (!std::isfinite(residual)) throw NumericalError("solver diverged");

    out.iterations = it;
    if (residual < best_residual) {
      best_residual = residual;
      best_average = (x_aff + x_psd + x_pos) / 3.0;
      out.primal_residual = primal;
      out.dual_residual = dual;
    }
    if (residual <= config.tol) {
      out.converged = true;
      break;
    }
  }

  const Eigen::MatrixXd sym = 0.5 * (best_average + best_average.transpose());
  out.x = project_affine(sym, r);
  const Eigen::MatrixXd center = feasible_start(n, r);
  out.feasibility_shift = feasibility_shift(out.x, center, r, upper);
  if (out.feasibility_shift > 0.0) {
    out.x = (1.0 - out.feasibility_shift) * out.x + out.feasibility_shift * center;
    out.x = 0.5 * (out.x + out.x.transpose());
  }
  out.objective = m.cwiseProduct(out.x).sum();
  out.state = std::move(st);
  return out;
}

FeasibilityReport check_feasibility(const ClusteringMatrix& x, int r) {
  FeasibilityReport rep;
  const Eigen::VectorXd ev = detail::eigenvalues_descending(0.5 * (x + x.transpose()));
  rep.min_eigenvalue = ev.size() > 0 ? ev(ev.size() - 1) : 0.0;
  rep.min_entry = x.minCoeff();
  rep.max_row_sum_error = (x.rowwise().sum().array() - 1.0).abs().maxCoeff();
  rep.trace_error = std::abs(x.trace() - r);
  return rep;
}

}  // namespace covsdp
