#include <covsdp/error.hpp>
#include <covsdp/experiment.hpp>
#include <covsdp/io.hpp>
#include <covsdp/synth.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace covsdp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json small_config() {
  return json::parse(R"({
    "mode": "synthetic",
    "model": {
      "sizes": [15, 15],
      "B": [[0.6, 0.1], [0.1, 0.6]],
      "means": [[1.5, 0.0], [-1.5, 0.0]],
      "sigmas": [1.0, 1.0]
    },
    "tuning": {"lambdas": [0.5, 5.0]},
    "solver": {"max_iter": 400},
    "replicates": 2,
    "seed": 3
  })");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("covsdp_exp_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Method, Names) {
  for (Method m : {Method::kNet, Method::kCov, Method::kComb}) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("sdp-foo"), ConfigError);
}

TEST(Config, ParsesDefaults) {
  const auto c = ExperimentConfig::from_json(small_config());
  EXPECT_EQ(c.r, 2);
  EXPECT_EQ(c.methods.size(), 3u);
  EXPECT_EQ(c.grid.lambdas, (std::vector<double>{0.5, 5.0}));
  EXPECT_EQ(c.solver.max_iter, 400);
  EXPECT_EQ(c.model.means[0].size(), 2);
  EXPECT_FALSE(c.unknown_r());
  EXPECT_EQ(c.reduction_rank(), 2);
}

TEST(Config, DimensionPadsMeansAndScaleMultipliesB) {
  auto j = small_config();
  j["model"]["dimension"] = 6;
  j["model"]["B_scale"] = 0.5;
  const auto c = ExperimentConfig::from_json(j);
  ASSERT_EQ(c.model.means[1].size(), 6);
  EXPECT_EQ(c.model.means[1](0), -1.5);
  EXPECT_EQ(c.model.means[1].tail(4).squaredNorm(), 0.0);
  EXPECT_DOUBLE_EQ(c.model.b(0, 0), 0.3);
}

TEST(Config, Rejections) {
  auto bad = [](auto edit) {
    auto j = small_config();
    edit(j);
    return j;
  };
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["colour"] = 1; })), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["model"]["extra"] = 1; })), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["mode"] = "other"; })), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["replicates"] = 0; })), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["replicates"] = "two"; })), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["methods"] = json::array({"sdp-x"}); })),
               ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["model"]["B"] = json::array({json::array({1})}); })),
               ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["tuning"]["lambdas"] = json::array({2, 1}); })),
               ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["dimension_reduction"] = "maybe"; })), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(bad([](json& j) { j["model"]["dimension"] = 1; })), ConfigError);
}

TEST(Config, LoadErrors) {
  const auto d = fresh_dir("load");
  EXPECT_THROW(ExperimentConfig::load(d / "missing.json"), DataError);
  std::ofstream(d / "broken.json") << "{ not json";
  EXPECT_THROW(ExperimentConfig::load(d / "broken.json"), ConfigError);
  fs::remove_all(d);
}

TEST(Seeds, ReplicatesDiffer) {
  const auto c = ExperimentConfig::from_json(small_config());
  EXPECT_NE(replicate_seed(c, 0), replicate_seed(c, 1));
  EXPECT_EQ(replicate_seed(c, 1), replicate_seed(c, 1));
  const auto d0 = make_dataset(c, 0);
  const auto d0b = make_dataset(c, 0);
  const auto d1 = make_dataset(c, 1);
  EXPECT_EQ(d0.a, d0b.a);
  EXPECT_EQ(d0.y, d0b.y);
  EXPECT_NE(d0.a, d1.a);
  ASSERT_TRUE(d0.truth.has_value());
  EXPECT_EQ(d0.truth->n(), 30);
}

TEST(PrepareCovariates, ReducesOnlyAboveRank) {
  auto j = small_config();
  j["model"]["dimension"] = 10;
  auto c = ExperimentConfig::from_json(j);
  const auto data = make_dataset(c, 0);
  const auto reduced = prepare_covariates(c, data.y, 1);
  EXPECT_TRUE(reduced.reduced);
  EXPECT_EQ(reduced.y.cols(), 1);
  EXPECT_EQ(reduced.y.rows(), 30);
  EXPECT_EQ(reduced.d_eff, 1);
  EXPECT_GT(reduced.eta, 0.0);
  c.dimension_reduction = DimensionReduction::kNever;
  const auto full = prepare_covariates(c, data.y, 1);
  EXPECT_FALSE(full.reduced);
  EXPECT_EQ(full.d_eff, 10);
  c.d_eff = 3;
  EXPECT_EQ(prepare_covariates(c, data.y, 1).d_eff, 3);
  c.eta = 0.25;
  EXPECT_EQ(prepare_covariates(c, data.y, 1).eta, 0.25);
}

TEST(RunReplicate, RowsForEveryMethod) {
  const auto c = ExperimentConfig::from_json(small_config());
  const auto res = run_replicate(c, 0);
  ASSERT_EQ(res.methods.size(), 3u);
  EXPECT_EQ(res.methods[0].method, Method::kNet);
  EXPECT_EQ(res.methods[0].lambda_0, 0.0);
  EXPECT_TRUE(std::isinf(res.methods[1].lambda_0));
  EXPECT_TRUE(res.methods[2].lambda_0 == 0.5 || res.methods[2].lambda_0 == 5.0);
  for (const auto& m : res.methods) {
    EXPECT_FALSE(m.failed) << m.error;
    ASSERT_TRUE(m.nmi.has_value());
    EXPECT_GE(*m.nmi, 0.0);
    EXPECT_LE(*m.nmi, 1.0);
  }
  EXPECT_EQ(res.tuning.size(), 2u);
  EXPECT_FALSE(res.bounds.entries.empty());
}

TEST(RunExperiment, ByteIdenticalReruns) {
  const auto d = fresh_dir("rerun");
  auto j = small_config();
  j["output_dir"] = (d / "a").string();
  const auto ca = ExperimentConfig::from_json(j);
  j["output_dir"] = (d / "b").string();
  j["threads"] = 2;
  const auto cb = ExperimentConfig::from_json(j);
  const auto sa = run_experiment(ca);
  run_experiment(cb);
  EXPECT_EQ(sa.replicates, 2);
  EXPECT_EQ(sa.solves, 6);
  EXPECT_EQ(sa.failed, 0);
  for (const char* f : {"results.csv", "tuning.csv", "bounds_0.json", "bounds_1.json"}) {
    EXPECT_EQ(slurp(d / "a" / f), slurp(d / "b" / f)) << f;
  }
  EXPECT_TRUE(fs::exists(d / "a" / "timings.csv"));
  const auto results = slurp(d / "a" / "results.csv");
  EXPECT_EQ(results.rfind("replicate,seed,method,lambda_0,r,eta,nmi,accuracy,rel_frobenius_error,misclassified,"
                          "misclassification_bound,error_bound,objective,iterations,converged,status\n",
                          0),
            0u);
  EXPECT_NE(results.find("\nmedian,NA,sdp-comb,"), std::string::npos);
  EXPECT_NE(results.find(",sdp-cov,inf,"), std::string::npos);
  const auto bounds = json::parse(slurp(d / "a" / "bounds_0.json"));
  EXPECT_TRUE(bounds.at("bounds").is_array());
  fs::remove_all(d);
}

TEST(RunExperiment, RealModeFromFiles) {
  const auto d = fresh_dir("real");
  const std::vector<int> sizes{12, 12};
  const auto z = Labels::from_sizes(sizes);
  save_edge_list(d / "g.txt", sample_sbm(SbmParams(Eigen::Matrix2d{{0.7, 0.05}, {0.05, 0.7}}), z, 1));
  save_covariates_csv(d / "y.csv",
                      sample_mixture(MixtureParams({Eigen::Vector2d(4, 0), Eigen::Vector2d(-4, 0)}, {1.0, 1.0}), z, 2));
  save_labels(d / "z.txt", z);
  const json j = {{"mode", "real"},
                  {"data", {{"edges", "g.txt"}, {"covariates", "y.csv"}, {"labels", "z.txt"}}},
                  {"r", 2},
                  {"tuning", {{"lambdas", {1.0}}}},
                  {"output_dir", (d / "out").string()}};
  const auto c = ExperimentConfig::from_json(j, d);
  const auto res = run_replicate(c, 0);
  for (const auto& m : res.methods) {
    ASSERT_TRUE(m.accuracy.has_value());
    EXPECT_GE(*m.accuracy, 0.9) << to_string(m.method);
  }
  auto missing = j;
  missing["data"].erase("covariates");
  EXPECT_THROW(ExperimentConfig::from_json(missing, d), ConfigError);
  fs::remove_all(d);
}

TEST(ModelBounds, Entries) {
  const auto c = ExperimentConfig::from_json(small_config());
  const auto rep = model_bounds(c, 0.5, 1.0);
  EXPECT_FALSE(rep.entries.empty());
  const auto j = rep.to_json();
  for (const auto& e : j.at("bounds")) {
    EXPECT_TRUE(e.contains("name"));
    EXPECT_TRUE(e.contains("preconditions"));
  }
}
