#include <covsdp/error.hpp>
#include <covsdp/experiment.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kAllFailed = 3 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Base seed (overrides the config)");
  cmd->add_option("--out", o.out, "Output directory (overrides the config)");
  cmd->add_option("--threads", o.threads, "Concurrent replicates (overrides the config)")->check(CLI::PositiveNumber);
}

void apply(const Overrides& o, covsdp::ExperimentConfig& c) {
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.threads) c.threads = *o.threads;
}

int report(const covsdp::ExperimentConfig& c, const covsdp::ExperimentSummary& s) {
  std::cout << "replicates=" << s.replicates << " solves=" << s.solves << " failed=" << s.failed
            << " output=" << c.output_dir.string() << '\n';
  return s.solves > 0 && s.failed == s.solves ? kAllFailed : kOk;
}

int run_mode(const std::string& path, const Overrides& o, covsdp::ExperimentConfig::Mode expected) {
  auto c = covsdp::ExperimentConfig::load(path);
  if (c.mode != expected) {
    throw covsdp::ConfigError(expected == covsdp::ExperimentConfig::Mode::kSynthetic
                                  ? "synth needs a config with mode 'synthetic'"
                                  : "real needs a config with mode 'real'");
  }
  apply(o, c);
  return report(c, covsdp::run_experiment(c));
}

int run_tune(const std::string& path, const Overrides& o) {
  auto c = covsdp::ExperimentConfig::load(path);
  apply(o, c);
  c.methods = {covsdp::Method::kComb};
  c.replicates = 1;
  c.validate();
  const auto rep = covsdp::run_replicate(c, 0);
  std::filesystem::create_directories(c.output_dir);
  covsdp::write_tuning_csv(c.output_dir / "tuning.csv", {rep});
  const auto& m = rep.methods.front();
  if (m.failed) {
    std::cerr << "tuning failed: " << m.error << '\n';
    return kAllFailed;
  }
  std::cout << "lambda_0=" << covsdp::format_double(m.lambda_0) << " r=" << m.r
            << " eta=" << covsdp::format_double(m.eta) << '\n';
  return kOk;
}

struct SolveArgs {
  std::string edges;
  std::string covariates;
  std::string labels;
  bool directed = false;
  int threshold = 5;
  int r = 0;
  std::optional<double> lambda;
  std::optional<double> eta;
  bool no_standardize = false;
};

int run_solve(const SolveArgs& a, const Overrides& o) {
  covsdp::ExperimentConfig c;
  c.mode = covsdp::ExperimentConfig::Mode::kReal;
  c.data.edges = a.edges;
  c.data.directed = a.directed;
  c.data.threshold = a.threshold;
  c.data.covariates = a.covariates;
  c.data.standardize = !a.no_standardize;
  c.data.labels = a.labels;
  c.r = a.r;
  c.eta = a.eta;
  if (a.covariates.empty()) {
    c.methods = {covsdp::Method::kNet};
  } else {
    c.methods = {covsdp::Method::kComb};
    if (a.lambda) c.grid.lambdas = {*a.lambda};
  }
  apply(o, c);
  c.validate();
  const auto rep = covsdp::run_replicate(c, 0);
  std::filesystem::create_directories(c.output_dir);
  const auto& m = rep.methods.front();
  if (m.failed) {
    std::cerr << "solve failed: " << m.error << '\n';
    return kAllFailed;
  }
  covsdp::save_labels(c.output_dir / "labels.txt", *m.labels);
  covsdp::write_results_csv(c.output_dir / "results.csv", {rep});
  covsdp::write_tuning_csv(c.output_dir / "tuning.csv", {rep});
  std::cout << covsdp::to_string(m.method) << " lambda_0=" << covsdp::format_double(m.lambda_0) << " r=" << m.r
            << " iterations=" << m.iterations << " converged=" << m.converged << '\n';
  return kOk;
}

int run_bounds(const std::string& path, std::optional<double> eta, double lambda_0, const Overrides& o) {
  auto c = covsdp::ExperimentConfig::load(path);
  apply(o, c);
  if (!eta) {
    try {
      eta = covsdp::theoretical_eta(c.model.mixture(), c.model.mixture().d()).eta;
    } catch (const covsdp::OutOfRegime& e) {
      throw covsdp::ConfigError(std::string(e.what()) + "; pass --eta");
    }
  }
  const auto report = covsdp::model_bounds(c, *eta, lambda_0);
  std::filesystem::create_directories(c.output_dir);
  const auto file = c.output_dir / "bounds.json";
  std::ofstream out(file, std::ios::binary);
  if (!out) throw covsdp::DataError("cannot write " + file.string());
  const std::string text = report.to_json().dump(2);
  out << text << '\n';
  std::cout << text << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariate-regularized SDP community detection"};
  app.require_subcommand(1);

  Overrides o;
  std::string config;

  auto* synth = app.add_subcommand("synth", "Run a synthetic experiment from a JSON config");
  synth->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  add_common(synth, o);

  auto* real = app.add_subcommand("real", "Run an experiment on user-supplied data files");
  real->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  add_common(real, o);

  auto* tune = app.add_subcommand("tune", "Eigen-gap selection of lambda (and r) on replicate 0");
  tune->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  add_common(tune, o);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Cluster one graph (plus optional covariates)");
  solve->add_option("--edges", sa.edges, "Edge list, one 'src dst' pair per line")->required();
  solve->add_option("--covariates", sa.covariates, "Covariate CSV with a header row");
  solve->add_option("--labels", sa.labels, "Ground-truth labels for scoring");
  solve->add_flag("--directed", sa.directed, "Treat edges as directed and threshold G G^T");
  solve->add_option("--threshold", sa.threshold, "Common out-neighbour threshold for directed input");
  solve->add_option("--r", sa.r, "Number of clusters")->required()->check(CLI::PositiveNumber);
  solve->add_option("--lambda", sa.lambda, "Fixed lambda_0 (default: eigen-gap tuning)");
  solve->add_option("--eta", sa.eta, "Fixed kernel scale (default: bandwidth heuristic)");
  solve->add_flag("--no-standardize", sa.no_standardize, "Use covariates as given");
  add_common(solve, o);

  std::optional<double> bounds_eta;
  double bounds_lambda = 0.0;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the theoretical bounds of a synthetic model");
  bounds->add_option("--config", config, "Synthetic experiment config (JSON)")->required()->check(CLI::ExistingFile);
  bounds->add_option("--eta", bounds_eta, "Kernel scale (default: the theoretical eta)");
  bounds->add_option("--lambda", bounds_lambda, "lambda_0 for the combined bounds");
  add_common(bounds, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    using Mode = covsdp::ExperimentConfig::Mode;
    if (*synth) return run_mode(config, o, Mode::kSynthetic);
    if (*real) return run_mode(config, o, Mode::kReal);
    if (*tune) return run_tune(config, o);
    if (*solve) return run_solve(sa, o);
    if (*bounds) return run_bounds(config, bounds_eta, bounds_lambda, o);
  } catch (const covsdp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const covsdp::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const covsdp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}
