#pragma once

#include "covsdp/covariates.hpp"
#include "covsdp/io.hpp"
#include "covsdp/model.hpp"
#include "covsdp/rounding.hpp"
#include "covsdp/sdp.hpp"
#include "covsdp/theory.hpp"
#include "covsdp/tuning.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace covsdp {

/// sdp-net: M = A. sdp-cov: M = K. sdp-comb: M = A + lambda_0/n K, lambda_0
/// chosen by eigen gap.
enum class Method { kNet, kCov, kComb };

const char* to_string(Method m) noexcept;
/// Throws ConfigError for an unknown name.
Method parse_method(std::string_view name);

/// kAuto reduces when the covariate dimension exceeds the cluster count.
enum class DimensionReduction { kAuto, kAlways, kNever };

struct SyntheticModel {
  std::vector<int> sizes;
  Eigen::MatrixXd b;                    // already multiplied by B_scale
  std::vector<Eigen::VectorXd> means;   // already zero-padded to `dimension`
  std::vector<double> sigmas;
  std::vector<double> psis;             // empty: same as sigmas

  Labels labels() const { return Labels::from_sizes(sizes); }
  SbmParams sbm() const { return SbmParams(b); }
  MixtureParams mixture() const { return MixtureParams(means, sigmas, psis); }
};

struct RealData {
  std::filesystem::path edges;
  bool directed = false;
  // Directed graphs are turned into 1(G G^T >= threshold).
  int threshold = 5;
  std::optional<int> nodes;
  std::filesystem::path covariates;  // empty: no covariates (sdp-net only)
  bool standardize = true;
  // Replace the single covariate column by its standardized logarithm.
  bool log_mass = false;
  std::filesystem::path labels;  // empty: no ground truth
};

struct ExperimentConfig {
  enum class Mode { kSynthetic, kReal };

  Mode mode = Mode::kSynthetic;
  SyntheticModel model;
  RealData data;
  std::vector<Method> methods{Method::kNet, Method::kCov, Method::kComb};
  // Cluster count; ignored when grid.rs is non-empty (unknown-r mode).
  int r = 0;
  TuningGrid grid = TuningGrid::default_grid();
  bool warm_start = true;
  BandwidthOptions bandwidth;
  std::optional<double> eta;   // fixed bandwidth instead of tune_bandwidth
  std::optional<int> d_eff;    // intrinsic dimension override when not reduced
  DimensionReduction dimension_reduction = DimensionReduction::kAuto;
  SolverConfig solver;
  RoundingConfig rounding;     // seed is replaced per replicate
  int replicates = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  std::filesystem::path output_dir = "out";

  bool unknown_r() const { return !grid.rs.empty(); }
  // Cluster count used for dimension reduction: r, or max(rs) when unknown.
  int reduction_rank() const { return unknown_r() ? grid.rs.back() : r; }

  /// Parses the JSON schema documented in the README. Relative data paths are
  /// resolved against base_dir. Throws ConfigError on unknown keys, wrong
  /// types or invalid values.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  /// Reads and parses a config file (DataError if unreadable, ConfigError if
  /// not valid JSON or not a valid config).
  static ExperimentConfig load(const std::filesystem::path& path);

  void validate() const;
};

/// Seed of replicate i: derive_seed(config.seed, i). Its sub-streams are
/// 1 (graph), 2 (covariates), 3 (PCA split) and 4 (rounding).
std::uint64_t replicate_seed(const ExperimentConfig& config, int replicate);

/// Synthetic mode samples a fresh graph and covariates for the replicate;
/// real mode loads the files (identical for every replicate).
Dataset make_dataset(const ExperimentConfig& config, int replicate);

struct PreparedCovariates {
  CovariateMatrix y;  // possibly projected to reduction_rank() - 1 dimensions
  int d_eff = 0;
  double eta = 0.0;
  bool reduced = false;
};

/// Optional split-sample PCA (the basis is fit on P1 and applied to every
/// row), then the bandwidth heuristic with the intrinsic dimension.
PreparedCovariates prepare_covariates(const ExperimentConfig& config, const CovariateMatrix& y, std::uint64_t seed);

struct MethodResult {
  Method method = Method::kNet;
  double lambda_0 = 0.0;  // +inf for sdp-cov
  int r = 0;
  double eta = 0.0;
  std::optional<double> nmi;
  std::optional<double> accuracy;
  std::optional<double> rel_frobenius_error;
  std::optional<int> misclassified;
  std::optional<double> misclassification_bound;
  std::optional<double> error_bound;  // Frobenius-squared bound at this lambda_0
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
  double seconds = 0.0;
  std::optional<Labels> labels;
};

struct TuningRow {
  Method method = Method::kComb;
  TuningPoint point;
};

struct ReplicateResult {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<MethodResult> methods;
  std::vector<TuningRow> tuning;
  BoundReport bounds;
};

/// Runs every configured method on one replicate. Solver failures are
/// recorded in the rows; only data/config problems throw.
ReplicateResult run_replicate(const ExperimentConfig& config, int replicate);

/// Population-level bounds of a synthetic config at lambda_0 (no solving).
/// eta is the kernel scale used for the covariate separations.
BoundReport model_bounds(const ExperimentConfig& config, double eta, double lambda_0);

struct ExperimentSummary {
  int replicates = 0;
  int solves = 0;
  int failed = 0;
};

/// Runs all replicates (up to config.threads concurrently) and writes, in
/// output_dir:
///   results.csv       one row per (replicate, method) plus median rows
///   timings.csv       wall-clock seconds per solve
///   tuning.csv        every grid point visited by eigen-gap selection
///   bounds_<i>.json   BoundReport of replicate i
/// Everything except timings.csv is byte-identical across runs with the same
/// config.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Writers used by run_experiment, exposed for the CLI and tests.
void write_results_csv(const std::filesystem::path& path, const std::vector<ReplicateResult>& results);
void write_timings_csv(const std::filesystem::path& path, const std::vector<ReplicateResult>& results);
void write_tuning_csv(const std::filesystem::path& path, const std::vector<ReplicateResult>& results);

}  // namespace covsdp
