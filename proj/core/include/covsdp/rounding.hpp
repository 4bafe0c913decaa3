#pragma once

#include "covsdp/model.hpp"

#include <cstdint>

namespace covsdp {

struct RoundingConfig {
  int restarts = 10;
  int kmeans_max_iter = 100;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  Labels labels;
  Eigen::MatrixXd centers;  // k x p
  double cost = 0.0;        // sum of squared distances to assigned centers
};

/// Lloyd's algorithm from k-means++ seeding, best of `restarts` runs.
///
/// Restart t draws from Rng(derive_seed(seed, t)). Distance ties go to the
/// lowest index; a cluster left empty is re-seeded with the point farthest
/// from its current center. The run with the lowest cost wins (ties: lowest
/// restart index). Output labels are canonical (first-appearance order) and
/// every cluster is non-empty. Throws ParameterError unless 1 <= k <= n.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, const RoundingConfig& config = {});

/// k-means on the rows of the top-r eigenvector matrix of x (eigenvalues in
/// descending order, rows not normalized). Throws ParameterError if r > n.
Labels spectral_round(const ClusteringMatrix& x, int r, const RoundingConfig& config = {});

}  // namespace covsdp
