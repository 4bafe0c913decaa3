#include <covsdp/covariates.hpp>
#include <covsdp/model.hpp>
#include <covsdp/rounding.hpp>
#include <covsdp/sdp.hpp>
#include <covsdp/synth.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

covsdp::Labels balanced(int n, int r) {
  std::vector<int> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = i % r;
  return covsdp::Labels(z, r);
}

Eigen::MatrixXd random_symmetric(int n) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = normal(gen);
  }
  return s;
}

Eigen::MatrixXd sbm_graph(int n, int r) {
  const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(r, r, 0.05) + 0.25 * Eigen::MatrixXd::Identity(r, r);
  return covsdp::sample_sbm(covsdp::SbmParams(b), balanced(n, r), 7);
}

void BM_ProjectPsd(benchmark::State& state) {
  const auto s = random_symmetric(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(covsdp::project_psd(s));
}
BENCHMARK(BM_ProjectPsd)->Arg(60)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);

void BM_ProjectAffine(benchmark::State& state) {
  const auto s = random_symmetric(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(covsdp::project_affine(s, 3));
}
BENCHMARK(BM_ProjectAffine)->Arg(120)->Arg(240)->Unit(benchmark::kMicrosecond);

void BM_GaussianKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const covsdp::MixtureParams mix({Eigen::VectorXd::Zero(100), Eigen::VectorXd::Ones(100)}, {1.0, 1.0});
  const auto y = covsdp::sample_mixture(mix, balanced(n, 2), 3);
  for (auto _ : state) benchmark::DoNotOptimize(covsdp::gaussian_kernel(y, 0.05));
}
BENCHMARK(BM_GaussianKernel)->Arg(240)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_SolveSdp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = sbm_graph(n, 3);
  covsdp::SolverConfig c;
  c.max_iter = 100;
  c.tol = 1e-300;  // run all max_iter iterations
  for (auto _ : state) benchmark::DoNotOptimize(covsdp::solve_sdp(a, 3, c));
  state.counters["s_per_iter"] = benchmark::Counter(100.0 * static_cast<double>(state.iterations()),
                                                    benchmark::Counter::kIsRate | benchmark::Counter::kInvert);
}
BENCHMARK(BM_SolveSdp)->Arg(60)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);

void BM_SpectralRound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = covsdp::ground_truth_matrix(balanced(n, 4));
  for (auto _ : state) benchmark::DoNotOptimize(covsdp::spectral_round(x, 4));
}
BENCHMARK(BM_SpectralRound)->Arg(240)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
