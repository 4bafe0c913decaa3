#include "covsdp/theory.hpp"

#include "covsdp/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace covsdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_radii(const MixtureParams& params, std::span<const double> delta) {
  if (static_cast<int>(delta.size()) != params.r()) throw DimensionError("one radius per cluster required");
  for (double v : delta) {
    if (!(v >= 0.0)) throw ParameterError("radii must be non-negative");
  }
}

double min_gap(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw DimensionError("per-cluster vectors must be non-empty and aligned");
  double best = kInf;
  for (std::size_t k = 0; k < a.size(); ++k) best = std::min(best, a[k] - b[k]);
  return best;
}

double cross_value(const MixtureParams& params, std::span<const double> delta, int k, int l, double eta,
                   KernelArgument convention) {
  const double gap = std::max(0.0, params.distance(k, l) - delta[static_cast<std::size_t>(k)] -
                                       delta[static_cast<std::size_t>(l)]);
  return kernel_profile(gap, eta, convention);
}

}  // namespace

double kernel_profile(double expression, double eta, KernelArgument convention) {
  const double x = convention == KernelArgument::kSquared ? expression * expression : expression;
  return std::exp(-eta * x);
}

Separation separation_nu(const MixtureParams& params, std::span<const double> delta, double eta,
                         KernelArgument convention) {
  check_radii(params, delta);
  if (!(eta >= 0.0)) throw ParameterError("eta must be non-negative");
  const int r = params.r();
  Separation out;
  out.nu.resize(static_cast<std::size_t>(r));
  out.within.resize(static_cast<std::size_t>(r));
  out.across.resize(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    out.within[ku] = kernel_profile(2.0 * delta[ku], eta, convention);
    double s = 0.0;
    for (int l = 0; l < r; ++l) {
      if (l == k) continue;
      s = std::max(s, cross_value(params, delta, k, l, eta, convention));
      if (3.0 * delta[ku] + delta[static_cast<std::size_t>(l)] > params.distance(k, l)) out.radii_valid = false;
    }
    out.across[ku] = s;
    out.nu[ku] = out.within[ku] - s;
  }
  return out;
}

std::vector<double> default_radii(const MixtureParams& params, double c0) {
  std::vector<double> out;
  out.reserve(params.psis().size());
  for (double psi : params.psis()) out.push_back(std::sqrt(5.0) * c0 * psi * std::sqrt(static_cast<double>(params.d())));
  return out;
}

double ReferenceMatrix::separation() const { return min_gap(beta_in, beta_out); }

ReferenceMatrix reference_kernel(const KernelMatrix& k, const Labels& labels, const MixtureParams& params,
                                 std::span<const double> delta, double eta, KernelArgument convention) {
  check_radii(params, delta);
  const int n = labels.n();
  if (k.rows() != n || k.cols() != n) throw DimensionError("kernel size must match labels");
  if (labels.r() > params.r()) throw DimensionError("labels use more clusters than the mixture has");
  const int r = labels.r();

  Eigen::MatrixXd cap(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      cap(a, b) = a == b ? kernel_profile(2.0 * delta[static_cast<std::size_t>(a)], eta, convention)
                         : cross_value(params, delta, a, b, eta, convention);
    }
  }

  ReferenceMatrix out;
  out.q.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = labels[i];
      const int b = labels[j];
      out.q(i, j) = a == b ? cap(a, a) : std::min(cap(a, b), k(i, j));
    }
  }
  out.beta_in.resize(static_cast<std::size_t>(r));
  out.beta_out.assign(static_cast<std::size_t>(r), 0.0);
  for (int a = 0; a < r; ++a) {
    out.beta_in[static_cast<std::size_t>(a)] = cap(a, a);
    for (int b = 0; b < r; ++b) {
      if (b != a) out.beta_out[static_cast<std::size_t>(a)] = std::max(out.beta_out[static_cast<std::size_t>(a)], cap(a, b));
    }
  }
  return out;
}

ReferenceMatrix block_reference(const SbmParams& b, const Labels& labels) {
  if (labels.r() > b.r()) throw DimensionError("labels use more clusters than B has rows");
  const int n = labels.n();
  const int r = labels.r();
  ReferenceMatrix out;
  out.q.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.q(i, j) = b(labels[i], labels[j]);
  }
  out.beta_in.resize(static_cast<std::size_t>(r));
  out.beta_out.assign(static_cast<std::size_t>(r), 0.0);
  for (int k = 0; k < r; ++k) {
    out.beta_in[static_cast<std::size_t>(k)] = b(k, k);
    for (int l = 0; l < r; ++l) {
      if (l != k) out.beta_out[static_cast<std::size_t>(k)] = std::max(out.beta_out[static_cast<std::size_t>(k)], b(k, l));
    }
  }
  return out;
}

InequalityCheck lemma1_bound(const Eigen::MatrixXd& m, const ReferenceMatrix& q, const ClusteringMatrix& x_hat,
                             const ClusteringMatrix& x0, int m_min) {
  const auto n = m.rows();
  if (m.cols() != n || q.q.rows() != n || q.q.cols() != n || x_hat.rows() != n || x_hat.cols() != n ||
      x0.rows() != n || x0.cols() != n) {
    throw DimensionError("lemma inputs must share one square size");
  }
  if (m_min < 1) throw ParameterError("m_min must be positive");
  const double sep = q.separation();
  if (sep < 0.0) throw ParameterError("reference matrix has negative separation");
  const Eigen::MatrixXd diff = x_hat - x0;
  InequalityCheck out;
  out.lhs = diff.squaredNorm();
  if (sep == 0.0) {
    out.infinite = true;
    out.rhs = kInf;
    return out;
  }
  out.rhs = 2.0 * (m - q.q).cwiseProduct(diff).sum() / (m_min * sep);
  return out;
}

double linf_l1_norm(const Eigen::MatrixXd& m) {
  const auto n = m.cols();
  if (n > kMaxExactNormSize) throw SizeError("exact l_inf->l_1 norm is limited to n <= 22");
  if (n == 0 || m.rows() == 0) return 0.0;
  Eigen::VectorXd v = m.rowwise().sum();  // s = all ones
  double best = v.cwiseAbs().sum();
  std::vector<signed char> sign(static_cast<std::size_t>(n), 1);
  const std::uint64_t steps = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < steps; ++i) {
    const auto j = static_cast<Eigen::Index>(std::countr_zero(i)) + 1;
    auto& s = sign[static_cast<std::size_t>(j)];
    v -= (2.0 * s) * m.col(j);
    s = static_cast<signed char>(-s);
    best = std::max(best, v.cwiseAbs().sum());
  }
  return best;
}

GrothendieckReport grothendieck_check(const AdjacencyMatrix& a, const Eigen::MatrixXd& p, const Labels& labels,
                                      const ClusteringMatrix& x_hat, double k_g) {
  const int n = labels.n();
  if (a.rows() != n || a.cols() != n || p.rows() != n || p.cols() != n || x_hat.rows() != n || x_hat.cols() != n) {
    throw DimensionError("Grothendieck check inputs must match the label count");
  }
  if (!(k_g >= 1.0)) throw ParameterError("K_G must be at least 1");
  const Eigen::MatrixXd noise = a - p;
  const double m_min = labels.m_min();
  GrothendieckReport out;
  out.norm = linf_l1_norm(noise);
  out.rhs = k_g * out.norm;
  out.lhs_solution = std::abs(noise.cwiseProduct(m_min * x_hat).sum());
  out.lhs_truth = std::abs(noise.cwiseProduct(m_min * ground_truth_matrix(labels)).sum());
  out.solution_in_domain = (m_min * x_hat.diagonal()).maxCoeff() <= 1.0 + 1e-9;
  return out;
}

BoundValue sparse_graph_bound(std::span<const double> a, std::span<const double> b, double g, double alpha, int r) {
  BoundValue out;
  out.preconditions["g_at_least_9"] = g >= 9.0;
  const double gap = min_gap(a, b);
  if (!(gap > 0.0)) {
    out.infinite = true;
    out.value = kInf;
    return out;
  }
  out.value = 23.0 * alpha * alpha * r * std::sqrt(g) / gap;
  return out;
}

double pi_zero(std::span<const int> sizes, std::span<const double> delta, std::span<const double> psis) {
  if (sizes.size() != delta.size() || sizes.size() != psis.size()) {
    throw DimensionError("sizes, radii and psis must align");
  }
  double total = 0.0;
  double n = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const double mk = sizes[k];
    const double psi = psis[k];
    const double tail = psi > 0.0 ? std::exp(-delta[k] * delta[k] / (5.0 * psi * psi)) : 0.0;
    total += mk * tail + std::sqrt(mk * std::log(mk) / 2.0);
    n += mk;
  }
  return total / n;
}

BoundValue combined_bound(const CombinedBoundInputs& in) {
  const std::size_t r = in.sizes.size();
  if (r == 0 || in.a.size() != r || in.b.size() != r || in.delta.size() != r || in.psis.size() != r ||
      (in.lambda_0 != 0.0 && in.nu.size() != r)) {
    throw DimensionError("combined bound inputs must have one entry per cluster");
  }
  for (int m : in.sizes) {
    if (m < 1) throw ParameterError("cluster sizes must be positive");
  }
  const double n = std::accumulate(in.sizes.begin(), in.sizes.end(), 0.0);
  double sep = kInf;
  double pi_min = kInf;
  double spread = 0.0;
  for (std::size_t k = 0; k < r; ++k) {
    const double nu = in.nu.empty() ? 0.0 : in.nu[k];
    sep = std::min(sep, in.a[k] - in.b[k] + in.lambda_0 * nu);
    const double pi = in.sizes[k] / n;
    pi_min = std::min(pi_min, pi);
    spread += pi * pi * (1.0 - kernel_profile(2.0 * in.delta[k], in.eta, in.convention));
  }
  BoundValue out;
  out.preconditions["g_at_least_9"] = in.g >= 9.0;
  if (!(sep > 0.0)) {
    out.infinite = true;
    out.value = kInf;
    return out;
  }
  double covariate_term = 0.0;
  if (in.lambda_0 != 0.0) covariate_term = in.lambda_0 * (2.0 * pi_zero(in.sizes, in.delta, in.psis) + spread);
  out.value = in.leading * in.k_g * (6.0 * std::sqrt(in.g) + covariate_term) / (pi_min * pi_min * sep);
  return out;
}

BoundValue covariate_bound(const MixtureParams& params, double alpha, int r, int d) {
  if (d < 1) throw ParameterError("dimension must be positive");
  BoundValue out;
  out.order_only = true;
  const double dmin = params.d_min();
  const double psi = params.psi_max();
  const double sd = std::sqrt(static_cast<double>(d));
  const double ratio = psi > 0.0 ? dmin / psi : kInf;
  out.preconditions["separation"] = ratio > std::max(sd, 180.0 / sd);
  if (psi == 0.0) {
    out.value = 0.0;
    return out;
  }
  if (dmin == 0.0) {
    out.infinite = true;
    out.value = kInf;
    return out;
  }
  const double log_term = std::log(dmin / (psi * sd));
  out.value = alpha * alpha * d * psi * psi / (dmin * dmin) * std::max(log_term, static_cast<double>(r));
  return out;
}

TheoreticalEta theoretical_eta(const MixtureParams& params, int d) {
  if (d < 1) throw ParameterError("dimension must be positive");
  const double dmin = params.d_min();
  const double psi = params.psi_max();
  const double dd = d;
  if (!(psi > 0.0)) throw OutOfRegime("theoretical eta needs psi_max > 0");
  const double arg = dmin * dmin / (psi * psi * dd);
  if (!(arg > 1.0)) throw OutOfRegime("theoretical eta needs d_min^2 / (psi_max^2 d) > 1");
  TheoreticalEta out;
  out.c0 = std::sqrt(std::log(arg) / dd);
  out.xi = dmin / (2.0 * std::sqrt(5.0) * out.c0 * psi * std::sqrt(dd)) - 1.0;
  if (!(out.xi > 1.0)) throw OutOfRegime("theoretical eta needs xi > 1");
  out.phi = std::log(out.xi) / (out.xi * out.xi);
  out.eta = out.phi / (20.0 * out.c0 * out.c0 * psi * psi * dd);
  return out;
}

std::vector<double> dense_nu(const MixtureParams& params, double eta) {
  if (!(eta >= 0.0)) throw ParameterError("eta must be non-negative");
  const int r = params.r();
  const auto& s = params.sigmas();
  std::vector<double> out(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    const double sk = s[static_cast<std::size_t>(k)];
    double worst = 0.0;
    for (int l = 0; l < r; ++l) {
      if (l == k) continue;
      const double sl = s[static_cast<std::size_t>(l)];
      const double dkl = params.distance(k, l);
      worst = std::max(worst, std::exp(-eta * (dkl * dkl + sk * sk + sl * sl)));
    }
    out[static_cast<std::size_t>(k)] = std::exp(-eta * 2.0 * sk * sk) - worst;
  }
  return out;
}

double gamma_prime(std::span<const double> p, std::span<const double> q, std::span<const double> nu, double lambda) {
  if (p.size() != q.size() || p.size() != nu.size() || p.empty()) throw DimensionError("per-cluster vectors must align");
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  double best = kInf;
  for (std::size_t k = 0; k < p.size(); ++k) {
    best = std::min(best, (p[k] - q[k]) / (1.0 + lambda) + lambda / (1.0 + lambda) * nu[k]);
  }
  return best;
}

DenseBounds dense_bounds(const DenseBoundInputs& in) {
  if (in.n < 2 || in.d < 1 || in.r < 1) throw ParameterError("dense bounds need n >= 2, d >= 1, r >= 1");
  DenseBounds out;
  out.graph.order_only = out.kernel.order_only = out.combined.order_only = true;
  const double n = in.n;
  const double p_max = *std::max_element(in.p.begin(), in.p.end());
  const double graph_sep = min_gap(in.p, in.q);
  const double log_ratio = std::log(n) / std::min<double>(in.d, in.n);
  const double nu_min = *std::min_element(in.nu.begin(), in.nu.end());

  if (graph_sep > 0.0) {
    out.graph.value = in.c_g * in.r * in.alpha / graph_sep * std::sqrt(p_max / n);
  } else {
    out.graph.infinite = true;
    out.graph.value = kInf;
  }
  if (nu_min > 0.0) {
    out.kernel.value = in.c_k / nu_min * std::sqrt(in.r * in.alpha * in.alpha * log_ratio);
  } else {
    out.kernel.infinite = true;
    out.kernel.value = kInf;
  }
  out.gamma_prime = gamma_prime(in.p, in.q, in.nu, in.lambda);
  if (out.gamma_prime > 0.0) {
    const double sl = std::sqrt(in.lambda);
    out.combined.value = std::sqrt(2.0 * in.alpha * in.alpha * in.r) / out.gamma_prime *
                         (in.c_g / (1.0 + sl) * std::sqrt(in.r * p_max / n) + in.c_k * sl / (1.0 + sl) * std::sqrt(log_ratio));
  } else {
    out.combined.infinite = true;
    out.combined.value = kInf;
  }
  return out;
}

nlohmann::ordered_json BoundReport::to_json() const {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& [name, b] : entries) {
    nlohmann::ordered_json item;
    item["name"] = name;
    if (b.infinite || !std::isfinite(b.value)) {
      item["value"] = nullptr;
    } else {
      item["value"] = b.value;
    }
    item["infinite"] = b.infinite;
    item["order_only"] = b.order_only;
    nlohmann::ordered_json pre = nlohmann::ordered_json::object();
    for (const auto& [key, ok] : b.preconditions) pre[key] = ok;
    item["preconditions"] = pre;
    list.push_back(std::move(item));
  }
  nlohmann::ordered_json out;
  out["bounds"] = std::move(list);
  return out;
}

}  // namespace covsdp
