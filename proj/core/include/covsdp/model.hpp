#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace covsdp {

// n x n 0/1 symmetric matrix with a zero diagonal.
using AdjacencyMatrix = Eigen::MatrixXd;
// n x d matrix, row i holds the covariates of node i.
using CovariateMatrix = Eigen::MatrixXd;
// n x n symmetric kernel matrix, K_ii = 1.
using KernelMatrix = Eigen::MatrixXd;
// n x n symmetric matrix; either the normalized ground truth
// Z diag(1/m) Z^T or a relaxation output.
using ClusteringMatrix = Eigen::MatrixXd;

/// Cluster assignment of n nodes into r non-empty clusters, indices 0..r-1.
class Labels {
 public:
  /// Throws InvalidLabels if an index falls outside [0, r) or a cluster is empty.
  Labels(std::vector<int> assignments, int r);

  /// Infers r as max(index) + 1.
  static Labels from_assignments(std::vector<int> assignments);

  /// Contiguous blocks: sizes {2, 3} gives 0 0 1 1 1.
  static Labels from_sizes(std::span<const int> sizes);

  int n() const noexcept { return static_cast<int>(assignments_.size()); }
  int r() const noexcept { return r_; }
  int operator[](int i) const { return assignments_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& assignments() const noexcept { return assignments_; }
  const std::vector<int>& sizes() const noexcept { return sizes_; }

  int m_min() const;
  int m_max() const;
  double alpha() const { return static_cast<double>(m_max()) / m_min(); }
  // pi_k = m_k / n
  std::vector<double> proportions() const;
  // Node indices of cluster k in increasing order.
  std::vector<int> members(int k) const;

  // Relabels clusters in order of first appearance.
  Labels canonical() const;

  friend bool operator==(const Labels&, const Labels&) = default;

 private:
  std::vector<int> assignments_;
  int r_ = 0;
  std::vector<int> sizes_;
};

/// Symmetric r x r edge probability matrix of a stochastic block model.
class SbmParams {
 public:
  /// Throws ParameterError unless B is square, symmetric, with entries in [0, 1].
  explicit SbmParams(Eigen::MatrixXd b);

  int r() const noexcept { return static_cast<int>(b_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return b_; }
  double operator()(int k, int l) const { return b_(k, l); }

  // a_k = n B_kk
  Eigen::VectorXd within_rescaled(int n) const;
  // b_k = n max_{l != k} B_kl
  Eigen::VectorXd across_rescaled(int n) const;

  // Expected adjacency E[A | Z]: B_{z_i z_j} off the diagonal, zero on it.
  Eigen::MatrixXd expected_adjacency(const Labels& labels) const;

 private:
  Eigen::MatrixXd b_;
};

/// Spherical sub-gaussian mixture: Y_i = mu_{z_i} + sigma_{z_i} w_i.
class MixtureParams {
 public:
  /// psis defaults to sigmas when empty. Throws ParameterError on
  /// non-positive scales or means of unequal dimension.
  MixtureParams(std::vector<Eigen::VectorXd> means, std::vector<double> sigmas,
                std::vector<double> psis = {});

  int r() const noexcept { return static_cast<int>(means_.size()); }
  int d() const noexcept { return static_cast<int>(means_.front().size()); }
  const std::vector<Eigen::VectorXd>& means() const noexcept { return means_; }
  const std::vector<double>& sigmas() const noexcept { return sigmas_; }
  const std::vector<double>& psis() const noexcept { return psis_; }

  // d_kl = ||mu_k - mu_l||
  double distance(int k, int l) const;
  double d_min() const;
  double psi_max() const;

 private:
  std::vector<Eigen::VectorXd> means_;
  std::vector<double> sigmas_;
  std::vector<double> psis_;
};

enum class Assortativity { kStrong, kWeak, kNone };

const char* to_string(Assortativity a) noexcept;

/// X0 = Z diag(1/m_1, ..., 1/m_r) Z^T.
ClusteringMatrix ground_truth_matrix(const Labels& labels);

/// Strong: min_k B_kk > max_{k != l} B_kl. Weak: B_kk > B_kl for all l != k.
Assortativity classify_assortativity(const SbmParams& b);

/// g = 2/(n-1) * sum_{i<j} Var(A_ij) with Var(A_ij) = B(1-B).
double average_edge_variance(const SbmParams& b, const Labels& labels);

}  // namespace covsdp
