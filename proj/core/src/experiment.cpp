#include "covsdp/experiment.hpp"

#include "covsdp/error.hpp"
#include "covsdp/metrics.hpp"
#include "covsdp/random.hpp"
#include "covsdp/synth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

namespace covsdp {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

std::vector<double> to_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(what + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> to_int_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError(what + " must be an array of integers");
    out.push_back(v.get<int>());
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

SyntheticModel parse_model(const json& j) {
  check_keys(j, {"sizes", "B", "B_scale", "means", "dimension", "sigmas", "psis"}, "model");
  SyntheticModel m;
  m.sizes = to_int_vector(j.at("sizes"), "model.sizes");
  const std::size_t r = m.sizes.size();
  if (r == 0) throw ConfigError("model.sizes must not be empty");
  const json& b = j.at("B");
  if (!b.is_array() || b.size() != r) throw ConfigError("model.B must be an r x r array");
  const double scale = j.value("B_scale", 1.0);
  m.b.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  for (std::size_t k = 0; k < r; ++k) {
    const auto row = to_vector(b[k], "model.B row");
    if (row.size() != r) throw ConfigError("model.B must be an r x r array");
    for (std::size_t l = 0; l < r; ++l) m.b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = scale * row[l];
  }
  const json& means = j.at("means");
  if (!means.is_array() || means.size() != r) throw ConfigError("model.means needs one vector per cluster");
  std::size_t width = 0;
  std::vector<std::vector<double>> raw;
  for (const auto& mu : means) {
    raw.push_back(to_vector(mu, "model.means entry"));
    width = std::max(width, raw.back().size());
  }
  const std::size_t dim = j.contains("dimension") ? j.at("dimension").get<std::size_t>() : width;
  if (dim < width || dim == 0) throw ConfigError("model.dimension must be at least the mean length");
  for (const auto& mu : raw) {
    if (mu.size() != raw.front().size()) throw ConfigError("model.means entries must share one length");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t c = 0; c < mu.size(); ++c) v(static_cast<Eigen::Index>(c)) = mu[c];
    m.means.push_back(std::move(v));
  }
  m.sigmas = to_vector(j.at("sigmas"), "model.sigmas");
  if (j.contains("psis")) m.psis = to_vector(j.at("psis"), "model.psis");
  return m;
}

RealData parse_data(const json& j, const fs::path& base) {
  check_keys(j, {"edges", "directed", "threshold", "nodes", "covariates", "standardize", "log_mass", "labels"},
             "data");
  RealData d;
  d.edges = resolve(base, j.at("edges").get<std::string>());
  d.directed = j.value("directed", false);
  d.threshold = j.value("threshold", 5);
  if (j.contains("nodes")) d.nodes = j.at("nodes").get<int>();
  if (j.contains("covariates")) d.covariates = resolve(base, j.at("covariates").get<std::string>());
  d.standardize = j.value("standardize", true);
  d.log_mass = j.value("log_mass", false);
  if (j.contains("labels")) d.labels = resolve(base, j.at("labels").get<std::string>());
  return d;
}

void parse_tuning(const json& j, ExperimentConfig& c) {
  check_keys(j, {"lambdas", "lambda_min", "lambda_max", "lambda_count", "rs", "warm_start"}, "tuning");
  if (j.contains("lambdas")) {
    c.grid.lambdas = to_vector(j.at("lambdas"), "tuning.lambdas");
  } else if (j.contains("lambda_min") || j.contains("lambda_max") || j.contains("lambda_count")) {
    c.grid.lambdas = TuningGrid::log_spaced(j.value("lambda_min", 0.01), j.value("lambda_max", 100.0),
                                            j.value("lambda_count", 15));
  }
  if (j.contains("rs")) c.grid.rs = to_int_vector(j.at("rs"), "tuning.rs");
  c.warm_start = j.value("warm_start", true);
}

void parse_bandwidth(const json& j, ExperimentConfig& c) {
  check_keys(j, {"near_fraction", "coverage", "eta", "d_eff"}, "bandwidth");
  c.bandwidth.near_fraction = j.value("near_fraction", c.bandwidth.near_fraction);
  c.bandwidth.coverage = j.value("coverage", c.bandwidth.coverage);
  if (j.contains("eta") && !j.at("eta").is_null()) c.eta = j.at("eta").get<double>();
  if (j.contains("d_eff") && !j.at("d_eff").is_null()) c.d_eff = j.at("d_eff").get<int>();
}

void parse_solver(const json& j, SolverConfig& s) {
  check_keys(j, {"rho", "max_iter", "tol", "enforce_upper_bound", "upper_bound"}, "solver");
  s.rho = j.value("rho", s.rho);
  s.max_iter = j.value("max_iter", s.max_iter);
  s.tol = j.value("tol", s.tol);
  s.enforce_upper_bound = j.value("enforce_upper_bound", s.enforce_upper_bound);
  s.upper_bound = j.value("upper_bound", s.upper_bound);
}

void parse_rounding(const json& j, RoundingConfig& r) {
  check_keys(j, {"restarts", "max_iter"}, "rounding");
  r.restarts = j.value("restarts", r.restarts);
  r.kmeans_max_iter = j.value("max_iter", r.kmeans_max_iter);
}

std::string na(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

std::string na(double v) { return std::isnan(v) ? "NA" : format_double(v); }

std::string na(const std::optional<int>& v) { return v ? std::to_string(*v) : "NA"; }

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

bool needs_kernel(const ExperimentConfig& c) {
  return std::any_of(c.methods.begin(), c.methods.end(), [](Method m) { return m != Method::kNet; });
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct ModelQuantities {
  Labels labels;
  SbmParams sbm;
  MixtureParams mixture;
  std::vector<double> a;
  std::vector<double> b;
  double g = 0.0;
  std::optional<TheoreticalEta> theory;
  std::vector<double> delta;
};

ModelQuantities model_quantities(const ExperimentConfig& config) {
  ModelQuantities q{config.model.labels(), config.model.sbm(), config.model.mixture(), {}, {}, 0.0, {}, {}};
  const int n = q.labels.n();
  const Eigen::VectorXd a = q.sbm.within_rescaled(n);
  const Eigen::VectorXd b = q.sbm.across_rescaled(n);
  q.a.assign(a.data(), a.data() + a.size());
  q.b.assign(b.data(), b.data() + b.size());
  q.g = average_edge_variance(q.sbm, q.labels);
  try {
    q.theory = theoretical_eta(q.mixture, q.mixture.d());
    q.delta = default_radii(q.mixture, q.theory->c0);
  } catch (const OutOfRegime&) {
    q.delta.assign(static_cast<std::size_t>(q.mixture.r()), 0.0);
  }
  return q;
}

BoundValue combined_at(const ModelQuantities& q, double eta, double lambda_0) {
  CombinedBoundInputs in;
  in.a = q.a;
  in.b = q.b;
  in.lambda_0 = lambda_0;
  const Separation sep = separation_nu(q.mixture, q.delta, eta);
  in.nu = sep.nu;
  in.sizes = q.labels.sizes();
  in.g = q.g;
  in.delta = q.delta;
  in.eta = eta;
  in.psis = q.mixture.psis();
  BoundValue out = combined_bound(in);
  out.preconditions["radii_valid"] = sep.radii_valid;
  out.preconditions["theoretical_radii"] = q.theory.has_value();
  return out;
}

// Eigen-gap choice of r for a fixed objective matrix (sdp-net / sdp-cov in
// unknown-r mode). Ties go to the smaller r; converged solves outrank the rest.
SdpSolution select_r(const Eigen::MatrixXd& m, const ExperimentConfig& config, Method method, double lambda_0,
                     const std::optional<Labels>& truth, const RoundingConfig& rounding, int& r_star,
                     std::vector<TuningRow>& rows) {
  std::optional<SdpSolution> best;
  Incumbent incumbent{config.solver.tol};
  for (int r : config.grid.rs) {
    TuningRow row{method, {}};
    row.point.lambda_0 = lambda_0;
    row.point.r = r;
    try {
      SdpSolution sol = solve_sdp(m, r, config.solver);
      const EigenGap gap = eigen_gap(sol.x, r);
      row.point.eigen_gap = gap.value;
      row.point.degenerate = gap.degenerate;
      row.point.objective = sol.objective;
      row.point.iterations = sol.iterations;
      row.point.converged = sol.converged;
      if (truth) row.point.nmi_vs_truth = nmi(spectral_round(sol.x, r, rounding), *truth);
      if (incumbent.beaten_by(gap.value, sol.converged)) {
        incumbent = {incumbent.tie_tolerance, gap.value, sol.converged, true};
        r_star = r;
        best = std::move(sol);
      }
    } catch (const Error&) {
      row.point.failed = true;
    }
    rows.push_back(row);
  }
  if (!best) throw TuningError("every candidate r failed to solve");
  return std::move(*best);
}

}  // namespace

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::kNet:
      return "sdp-net";
    case Method::kCov:
      return "sdp-cov";
    case Method::kComb:
      return "sdp-comb";
  }
  return "sdp-net";
}

Method parse_method(std::string_view name) {
  if (name == "sdp-net") return Method::kNet;
  if (name == "sdp-cov") return Method::kCov;
  if (name == "sdp-comb") return Method::kComb;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  try {
    check_keys(j,
               {"mode", "model", "data", "methods", "r", "tuning", "bandwidth", "dimension_reduction", "solver",
                "rounding", "replicates", "seed", "threads", "output_dir"},
               "config");
    const std::string mode = j.value("mode", std::string("synthetic"));
    if (mode == "synthetic") {
      c.mode = Mode::kSynthetic;
      c.model = parse_model(j.at("model"));
      if (j.contains("data")) throw ConfigError("synthetic mode takes 'model', not 'data'");
    } else if (mode == "real") {
      c.mode = Mode::kReal;
      c.data = parse_data(j.at("data"), base_dir);
      if (j.contains("model")) throw ConfigError("real mode takes 'data', not 'model'");
    } else {
      throw ConfigError("mode must be 'synthetic' or 'real'");
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    c.r = j.value("r", c.mode == Mode::kSynthetic ? static_cast<int>(c.model.sizes.size()) : 0);
    if (j.contains("tuning")) parse_tuning(j.at("tuning"), c);
    if (j.contains("bandwidth")) parse_bandwidth(j.at("bandwidth"), c);
    const std::string red = j.value("dimension_reduction", std::string("auto"));
    if (red == "auto") {
      c.dimension_reduction = DimensionReduction::kAuto;
    } else if (red == "always") {
      c.dimension_reduction = DimensionReduction::kAlways;
    } else if (red == "never") {
      c.dimension_reduction = DimensionReduction::kNever;
    } else {
      throw ConfigError("dimension_reduction must be 'auto', 'always' or 'never'");
    }
    if (j.contains("solver")) parse_solver(j.at("solver"), c.solver);
    if (j.contains("rounding")) parse_rounding(j.at("rounding"), c.rounding);
    c.replicates = j.value("replicates", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    c.threads = j.value("threads", 1);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(j, path.parent_path());
}

void ExperimentConfig::validate() const {
  try {
    if (methods.empty()) throw ConfigError("at least one method is required");
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    grid.validate(false);
    if (!unknown_r() && r < 1) throw ConfigError("r must be >= 1 (or give tuning.rs)");
    for (int k : grid.rs) {
      if (k < 1) throw ConfigError("tuning.rs entries must be >= 1");
    }
    solver.validate();
    if (rounding.restarts < 1 || rounding.kmeans_max_iter < 1) throw ConfigError("rounding parameters must be >= 1");
    if (!(bandwidth.near_fraction > 0.0 && bandwidth.near_fraction < 1.0) ||
        !(bandwidth.coverage > 0.0 && bandwidth.coverage < 1.0)) {
      throw ConfigError("bandwidth fractions must lie in (0, 1)");
    }
    if (eta && !(*eta >= 0.0)) throw ConfigError("bandwidth.eta must be >= 0");
    if (d_eff && *d_eff < 1) throw ConfigError("bandwidth.d_eff must be >= 1");
    if (mode == Mode::kSynthetic) {
      const auto r_model = model.sizes.size();
      if (model.means.size() != r_model || model.sigmas.size() != r_model ||
          (!model.psis.empty() && model.psis.size() != r_model)) {
        throw ConfigError("model needs one mean, sigma (and psi) per cluster");
      }
      (void)model.labels();
      (void)model.sbm();
      (void)model.mixture();
    } else {
      if (data.edges.empty()) throw ConfigError("data.edges is required");
      if (data.threshold < 1) throw ConfigError("data.threshold must be >= 1");
      if (data.covariates.empty() && needs_kernel(*this)) {
        throw ConfigError("sdp-cov and sdp-comb need data.covariates");
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::uint64_t replicate_seed(const ExperimentConfig& config, int replicate) {
  return derive_seed(config.seed, static_cast<std::uint64_t>(replicate));
}

Dataset make_dataset(const ExperimentConfig& config, int replicate) {
  Dataset ds;
  if (config.mode == ExperimentConfig::Mode::kSynthetic) {
    const std::uint64_t seed = replicate_seed(config, replicate);
    const Labels labels = config.model.labels();
    ds.a = sample_sbm(config.model.sbm(), labels, derive_seed(seed, 1));
    ds.y = sample_mixture(config.model.mixture(), labels, derive_seed(seed, 2));
    ds.truth = labels;
    return ds;
  }
  const RealData& d = config.data;
  EdgeListOptions opts;
  opts.directed = d.directed;
  opts.nodes = d.nodes;
  const Eigen::MatrixXd g = load_edge_list(d.edges, opts);
  ds.a = d.directed ? threshold_symmetrize(g, d.threshold) : g;
  const auto n = ds.a.rows();
  if (!d.covariates.empty()) {
    ds.y = load_covariates_csv(d.covariates, d.standardize && !d.log_mass);
    if (d.log_mass) {
      if (ds.y.cols() != 1) throw DataError("log_mass expects a single covariate column");
      const Eigen::VectorXd masses = ds.y.col(0);
      try {
        ds.y = log_mass_normalize(std::span<const double>(masses.data(), static_cast<std::size_t>(masses.size())));
      } catch (const ParameterError& e) {
        throw DataError(e.what());
      }
    }
  } else {
    ds.y = CovariateMatrix(n, 0);
  }
  if (!d.labels.empty()) ds.truth = load_labels(d.labels);
  try {
    ds.validate();
  } catch (const DimensionError& e) {
    throw DataError(e.what());
  }
  return ds;
}

PreparedCovariates prepare_covariates(const ExperimentConfig& config, const CovariateMatrix& y, std::uint64_t seed) {
  if (y.cols() == 0) throw ConfigError("covariate methods need at least one covariate column");
  PreparedCovariates out;
  const int rank = config.reduction_rank();
  const bool reduce = config.dimension_reduction == DimensionReduction::kAlways ||
                      (config.dimension_reduction == DimensionReduction::kAuto && y.cols() > rank && rank >= 2);
  if (reduce) {
    const PcaSplit split = split_sample_pca(y, rank, seed);
    out.y = project_rows(y, split.basis);
    out.d_eff = rank - 1;
    out.reduced = true;
  } else {
    out.y = y;
    out.d_eff = config.d_eff.value_or(static_cast<int>(y.cols()));
  }
  out.eta = config.eta ? *config.eta : tune_bandwidth(out.y, out.d_eff, config.bandwidth);
  return out;
}

BoundReport model_bounds(const ExperimentConfig& config, double eta, double lambda_0) {
  if (config.mode != ExperimentConfig::Mode::kSynthetic) throw ConfigError("model bounds need a synthetic model");
  const ModelQuantities q = model_quantities(config);
  const int r = q.labels.r();
  const int n = q.labels.n();
  const int d = q.mixture.d();
  const double alpha = q.labels.alpha();
  BoundReport report;

  report.add("sparse_graph_eps_sq", sparse_graph_bound(q.a, q.b, q.g, alpha, r));

  BoundValue teta;
  teta.preconditions["in_regime"] = q.theory.has_value();
  teta.value = q.theory ? q.theory->eta : kNaN;
  report.add("theoretical_eta", teta);

  report.add("combined_frobenius_sq", combined_at(q, eta, lambda_0));
  report.add("covariate_order", covariate_bound(q.mixture, alpha, r, d));

  DenseBoundInputs dense;
  for (int k = 0; k < r; ++k) {
    dense.p.push_back(q.a[static_cast<std::size_t>(k)] / n);
    dense.q.push_back(q.b[static_cast<std::size_t>(k)] / n);
  }
  dense.nu = dense_nu(q.mixture, eta);
  dense.lambda = lambda_0 / n;
  dense.alpha = alpha;
  dense.r = r;
  dense.n = n;
  dense.d = d;
  const DenseBounds db = dense_bounds(dense);
  report.add("dense_graph_order", db.graph);
  report.add("dense_kernel_order", db.kernel);
  report.add("dense_combined_order", db.combined);
  return report;
}

ReplicateResult run_replicate(const ExperimentConfig& config, int replicate) {
  ReplicateResult res;
  res.replicate = replicate;
  res.seed = replicate_seed(config, replicate);
  const Dataset ds = make_dataset(config, replicate);
  const auto n = ds.a.rows();
  if (!config.unknown_r() && config.r > n) throw ConfigError("r exceeds the node count");

  PreparedCovariates cov;
  KernelMatrix k;
  if (needs_kernel(config)) {
    try {
      cov = prepare_covariates(config, ds.y, derive_seed(res.seed, 3));
    } catch (const DegenerateData& e) {
      throw DataError(e.what());
    }
    k = gaussian_kernel(cov.y, cov.eta);
  }
  RoundingConfig rounding = config.rounding;
  rounding.seed = derive_seed(res.seed, 4);
  const bool synthetic = config.mode == ExperimentConfig::Mode::kSynthetic;
  std::optional<ModelQuantities> q;
  if (synthetic) q = model_quantities(config);
  std::optional<ClusteringMatrix> x0;
  if (ds.truth) x0 = ground_truth_matrix(*ds.truth);

  double comb_lambda = 0.0;
  std::optional<SdpSolution> net_solution;
  for (Method method : config.methods) {
    MethodResult mr;
    mr.method = method;
    mr.eta = method == Method::kNet ? kNaN : cov.eta;
    const auto start = std::chrono::steady_clock::now();
    try {
      SdpSolution sol;
      int r = config.r;
      if (method == Method::kComb) {
        TuningOptions opts;
        opts.solver = config.solver;
        opts.warm_start = config.warm_start;
        opts.truth = ds.truth ? &*ds.truth : nullptr;
        opts.rounding = rounding;
        TuningResult tr = config.unknown_r() ? select_lambda_and_r(ds.a, k, config.grid, opts)
                                             : select_lambda(ds.a, k, config.r, config.grid, opts);
        for (const auto& p : tr.report) res.tuning.push_back({method, p});
        sol = std::move(tr.best);
        r = tr.r_star;
        mr.lambda_0 = tr.lambda_star;
        comb_lambda = tr.lambda_star;
      } else {
        const Eigen::MatrixXd& m = method == Method::kNet ? ds.a : k;
        mr.lambda_0 = method == Method::kNet ? 0.0 : kInf;
        sol = config.unknown_r() ? select_r(m, config, method, mr.lambda_0, ds.truth, rounding, r, res.tuning)
                                 : solve_sdp(m, r, config.solver);
      }
      mr.r = r;
      mr.objective = sol.objective;
      mr.iterations = sol.iterations;
      mr.converged = sol.converged;
      mr.labels = spectral_round(sol.x, r, rounding);
      if (ds.truth) {
        mr.nmi = nmi(*mr.labels, *ds.truth);
        if (std::max(r, ds.truth->r()) <= kMaxAccuracyClusters) {
          mr.accuracy = accuracy(*mr.labels, *ds.truth);
          mr.misclassified = misclassified_count(*mr.labels, *ds.truth);
        }
        mr.rel_frobenius_error = relative_frobenius_error(sol.x, *x0);
        mr.misclassification_bound = misclassification_bound(sol.x, *x0, ds.truth->m_max());
      }
      if (q && method != Method::kCov) {
        const BoundValue bound = combined_at(*q, cov.eta, method == Method::kNet ? 0.0 : mr.lambda_0);
        if (!bound.infinite) mr.error_bound = bound.value;
      }
      if (method == Method::kNet && r == config.r) net_solution = std::move(sol);
    } catch (const Error& e) {
      mr.failed = true;
      mr.error = e.what();
    }
    mr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.methods.push_back(std::move(mr));
  }

  if (synthetic) {
    res.bounds = model_bounds(config, cov.eta, comb_lambda);
    for (const auto& mr : res.methods) {
      if (!mr.misclassification_bound) continue;
      BoundValue v;
      v.value = *mr.misclassification_bound;
      if (mr.misclassified) v.preconditions["measured_within_bound"] = *mr.misclassified <= v.value;
      res.bounds.add(std::string("misclassification_") + to_string(mr.method), v);
    }
    if (net_solution && config.r == q->labels.r()) {
      const InequalityCheck chk = lemma1_bound(ds.a, block_reference(q->sbm, q->labels), net_solution->x, *x0,
                                               q->labels.m_min());
      BoundValue v;
      v.value = chk.rhs;
      v.infinite = chk.infinite;
      v.preconditions["measured_within_bound"] = chk.holds();
      res.bounds.add("lemma1_sdp-net", v);
    }
  }
  return res;
}

void write_results_csv(const fs::path& path, const std::vector<ReplicateResult>& results) {
  auto out = open_csv(path);
  out << "replicate,seed,method,lambda_0,r,eta,nmi,accuracy,rel_frobenius_error,misclassified,"
         "misclassification_bound,error_bound,objective,iterations,converged,status\n";
  std::vector<Method> order;
  for (const auto& rep : results) {
    for (const auto& m : rep.methods) {
      if (std::find(order.begin(), order.end(), m.method) == order.end()) order.push_back(m.method);
      out << rep.replicate << ',' << rep.seed << ',' << to_string(m.method) << ',';
      if (m.failed) {
        out << "NA,NA," << na(m.eta) << ",NA,NA,NA,NA,NA,NA,NA,NA,0,failed\n";
        continue;
      }
      out << format_double(m.lambda_0) << ',' << m.r << ',' << na(m.eta) << ',' << na(m.nmi) << ','
          << na(m.accuracy) << ',' << na(m.rel_frobenius_error) << ',' << na(m.misclassified) << ','
          << na(m.misclassification_bound) << ',' << na(m.error_bound) << ',' << format_double(m.objective) << ','
          << m.iterations << ',' << (m.converged ? 1 : 0) << ',' << (m.converged ? "ok" : "not_converged") << '\n';
    }
  }
  for (Method method : order) {
    std::vector<double> nmis, accs, errs, miss, iters;
    for (const auto& rep : results) {
      for (const auto& m : rep.methods) {
        if (m.method != method || m.failed) continue;
        if (m.nmi) nmis.push_back(*m.nmi);
        if (m.accuracy) accs.push_back(*m.accuracy);
        if (m.rel_frobenius_error) errs.push_back(*m.rel_frobenius_error);
        if (m.misclassified) miss.push_back(*m.misclassified);
        iters.push_back(m.iterations);
      }
    }
    out << "median,NA," << to_string(method) << ",NA,NA,NA," << na(median(nmis)) << ',' << na(median(accs)) << ','
        << na(median(errs)) << ',' << na(median(miss)) << ",NA,NA,NA," << na(median(iters)) << ",NA,summary\n";
  }
}

void write_timings_csv(const fs::path& path, const std::vector<ReplicateResult>& results) {
  auto out = open_csv(path);
  out << "replicate,method,solve_seconds\n";
  for (const auto& rep : results) {
    for (const auto& m : rep.methods) {
      out << rep.replicate << ',' << to_string(m.method) << ',' << format_double(m.seconds) << '\n';
    }
  }
}

void write_tuning_csv(const fs::path& path, const std::vector<ReplicateResult>& results) {
  auto out = open_csv(path);
  out << "replicate,method,lambda_0,r,eigen_gap,degenerate,objective,nmi_vs_truth,iterations,converged,failed\n";
  for (const auto& rep : results) {
    for (const auto& [method, p] : rep.tuning) {
      out << rep.replicate << ',' << to_string(method) << ',' << format_double(p.lambda_0) << ',' << p.r << ',';
      if (p.failed) {
        out << "NA,NA,NA,NA,NA,NA,1\n";
        continue;
      }
      out << format_double(p.eigen_gap) << ',' << (p.degenerate ? 1 : 0) << ',' << format_double(p.objective) << ','
          << na(p.nmi_vs_truth) << ',' << p.iterations << ',' << (p.converged ? 1 : 0) << ",0\n";
    }
  }
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw DataError("cannot create " + config.output_dir.string() + ": " + ec.message());

  std::vector<ReplicateResult> results(static_cast<std::size_t>(config.replicates));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < config.replicates; i = next++) {
      try {
        results[static_cast<std::size_t>(i)] = run_replicate(config, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.replicates;
      }
    }
  };
  const int workers = std::min(config.threads, config.replicates);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  write_results_csv(config.output_dir / "results.csv", results);
  write_timings_csv(config.output_dir / "timings.csv", results);
  write_tuning_csv(config.output_dir / "tuning.csv", results);
  for (const auto& rep : results) {
    std::ofstream out(config.output_dir / ("bounds_" + std::to_string(rep.replicate) + ".json"), std::ios::binary);
    if (!out) throw DataError("cannot write bounds file");
    out << rep.bounds.to_json().dump(2) << '\n';
  }

  ExperimentSummary summary;
  summary.replicates = config.replicates;
  for (const auto& rep : results) {
    for (const auto& m : rep.methods) {
      ++summary.solves;
      if (m.failed) ++summary.failed;
    }
  }
  return summary;
}

}  // namespace covsdp
