#include "covsdp/rounding.hpp"

#include "covsdp/error.hpp"
#include "covsdp/random.hpp"
#include "linalg.hpp"

#include <limits>
#include <vector>

namespace covsdp {

namespace {

struct Run {
  std::vector<int> assign;
  Eigen::MatrixXd centers;
  double cost = std::numeric_limits<double>::infinity();
};

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& pts, int k, Rng& rng) {
  const auto n = pts.rows();
  Eigen::MatrixXd centers(k, pts.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  auto first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
  centers.row(0) = pts.row(first);
  chosen[static_cast<std::size_t>(first)] = true;
  Eigen::VectorXd d2 = (pts.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (d2(i) > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (Eigen::Index i = n - 1; i >= 0; --i) {
          if (d2(i) > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // All remaining points coincide with a center; take the lowest unused index.
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) {
          pick = i;
          break;
        }
      }
    }
    centers.row(c) = pts.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;
    d2 = d2.cwiseMin((pts.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

int nearest(const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& p, double& best) {
  int arg = 0;
  best = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    const double d = (centers.row(c) - p).squaredNorm();
    if (d < best) {
      best = d;
      arg = static_cast<int>(c);
    }
  }
  return arg;
}

// Moves the point farthest from its own center (within a cluster of size > 1)
// into every empty cluster.
void fill_empty(const Eigen::MatrixXd& pts, Eigen::MatrixXd& centers, std::vector<int>& assign) {
  const int k = static_cast<int>(centers.rows());
  std::vector<int> size(static_cast<std::size_t>(k), 0);
  for (int a : assign) ++size[static_cast<std::size_t>(a)];
  for (int c = 0; c < k; ++c) {
    if (size[static_cast<std::size_t>(c)] > 0) continue;
    Eigen::Index far = -1;
    double far_d = -1.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const int own = assign[static_cast<std::size_t>(i)];
      if (size[static_cast<std::size_t>(own)] < 2) continue;
      const double d = (pts.row(i) - centers.row(own)).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    --size[static_cast<std::size_t>(assign[static_cast<std::size_t>(far)])];
    assign[static_cast<std::size_t>(far)] = c;
    size[static_cast<std::size_t>(c)] = 1;
    centers.row(c) = pts.row(far);
  }
}

// Hartigan refinement: move single points while that strictly lowers the
// cost. Moving x from a (size n_a) to b (size n_b) changes the cost by
// n_b / (n_b + 1) |x - c_b|^2 - n_a / (n_a - 1) |x - c_a|^2.
void refine(const Eigen::MatrixXd& pts, Eigen::MatrixXd& centers, std::vector<int>& assign, int max_pass) {
  const auto n = pts.rows();
  const auto k = centers.rows();
  std::vector<double> size(static_cast<std::size_t>(k), 0.0);
  for (int a : assign) size[static_cast<std::size_t>(a)] += 1.0;
  for (int pass = 0; pass < max_pass; ++pass) {
    bool moved = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int a = assign[static_cast<std::size_t>(i)];
      const double na = size[static_cast<std::size_t>(a)];
      if (na < 2.0) continue;
      const double leave = na / (na - 1.0) * (pts.row(i) - centers.row(a)).squaredNorm();
      int target = a;
      double best = 0.0;
      for (Eigen::Index b = 0; b < k; ++b) {
        if (b == a) continue;
        const double nb = size[static_cast<std::size_t>(b)];
        const double delta = nb / (nb + 1.0) * (pts.row(i) - centers.row(b)).squaredNorm() - leave;
        if (delta < best - 1e-12 * leave) {
          best = delta;
          target = static_cast<int>(b);
        }
      }
      if (target == a) continue;
      const double nb = size[static_cast<std::size_t>(target)];
      centers.row(a) = (centers.row(a) * na - pts.row(i)) / (na - 1.0);
      centers.row(target) = (centers.row(target) * nb + pts.row(i)) / (nb + 1.0);
      size[static_cast<std::size_t>(a)] -= 1.0;
      size[static_cast<std::size_t>(target)] += 1.0;
      assign[static_cast<std::size_t>(i)] = target;
      moved = true;
    }
    if (!moved) break;
  }
}

Run lloyd(const Eigen::MatrixXd& pts, int k, int max_iter, Rng& rng) {
  const auto n = pts.rows();
  Run run;
  run.centers = plus_plus_seeds(pts, k, rng);
  run.assign.assign(static_cast<std::size_t>(n), -1);
  double dist = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = nearest(run.centers, pts.row(i), dist);
      if (c != run.assign[static_cast<std::size_t>(i)]) {
        run.assign[static_cast<std::size_t>(i)] = c;
        changed = true;
      }
    }
    fill_empty(pts, run.centers, run.assign);
    if (!changed && it > 0) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, pts.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(run.assign[static_cast<std::size_t>(i)]) += pts.row(i);
      counts(run.assign[static_cast<std::size_t>(i)]) += 1.0;
    }
    for (int c = 0; c < k; ++c) run.centers.row(c) = sums.row(c) / counts(c);
  }
  refine(pts, run.centers, run.assign, max_iter);
  run.cost = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.cost += (pts.row(i) - run.centers.row(run.assign[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, const RoundingConfig& config) {
  const auto n = static_cast<int>(points.rows());
  if (k < 1 || k > n) throw ParameterError("k-means needs 1 <= k <= n");
  if (config.restarts < 1) throw ParameterError("k-means needs at least one restart");
  if (config.kmeans_max_iter < 1) throw ParameterError("k-means needs at least one iteration");

  Run best;
  for (int t = 0; t < config.restarts; ++t) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    Run run = lloyd(points, k, config.kmeans_max_iter, rng);
    if (run.cost < best.cost) best = std::move(run);
  }
  Labels raw(best.assign, k);
  Labels canon = raw.canonical();
  // Reorder centers to follow the canonical labels.
  Eigen::MatrixXd centers(k, points.cols());
  for (int i = 0; i < n; ++i) centers.row(canon[i]) = best.centers.row(raw[i]);
  return {std::move(canon), std::move(centers), best.cost};
}

Labels spectral_round(const ClusteringMatrix& x, int r, const RoundingConfig& config) {
  const auto n = static_cast<int>(x.rows());
  if (x.rows() != x.cols()) throw ParameterError("solution matrix must be square");
  if (r < 1 || r > n) throw ParameterError("rounding needs 1 <= r <= n");
  const detail::EigenPairs top = detail::top_eigenpairs(0.5 * (x + x.transpose()), r);
  return kmeans(top.vectors, r, config).labels;
}

}  // namespace covsdp
