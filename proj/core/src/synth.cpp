#include "covsdp/synth.hpp"

#include "covsdp/error.hpp"
#include "covsdp/random.hpp"

namespace covsdp {

AdjacencyMatrix sample_sbm(const SbmParams& b, const Labels& labels, std::uint64_t seed) {
  if (labels.r() > b.r()) throw DimensionError("labels use more clusters than B has rows");
  const int n = labels.n();
  Rng rng(seed);
  AdjacencyMatrix a = AdjacencyMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < b(labels[i], labels[j])) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

CovariateMatrix sample_mixture(const MixtureParams& params, const Labels& labels, std::uint64_t seed) {
  if (labels.r() > params.r()) throw DimensionError("labels use more clusters than the mixture has components");
  const int n = labels.n();
  const int d = params.d();
  Rng rng(seed);
  CovariateMatrix y(n, d);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(labels[i]);
    const auto& mu = params.means()[k];
    const double sigma = params.sigmas()[k];
    for (int c = 0; c < d; ++c) y(i, c) = mu(c) + sigma * rng.normal();
  }
  return y;
}

}  // namespace covsdp
