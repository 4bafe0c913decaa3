#include "covsdp/model.hpp"

#include "covsdp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace covsdp {

Labels::Labels(std::vector<int> assignments, int r) : assignments_(std::move(assignments)), r_(r) {
  if (r_ < 1) throw InvalidLabels("cluster count must be at least 1");
  if (assignments_.empty()) throw InvalidLabels("labels must cover at least one node");
  sizes_.assign(static_cast<std::size_t>(r_), 0);
  for (int z : assignments_) {
    if (z < 0 || z >= r_) {
      throw InvalidLabels("cluster index " + std::to_string(z) + " outside [0, " + std::to_string(r_) + ")");
    }
    ++sizes_[static_cast<std::size_t>(z)];
  }
  for (int k = 0; k < r_; ++k) {
    if (sizes_[static_cast<std::size_t>(k)] == 0) {
      throw InvalidLabels("cluster " + std::to_string(k) + " is empty");
    }
  }
}

Labels Labels::from_assignments(std::vector<int> assignments) {
  if (assignments.empty()) throw InvalidLabels("labels must cover at least one node");
  const int r = *std::max_element(assignments.begin(), assignments.end()) + 1;
  return Labels(std::move(assignments), r);
}

Labels Labels::from_sizes(std::span<const int> sizes) {
  std::vector<int> z;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 1) throw InvalidLabels("cluster sizes must be positive");
    z.insert(z.end(), static_cast<std::size_t>(sizes[k]), static_cast<int>(k));
  }
  return Labels(std::move(z), static_cast<int>(sizes.size()));
}

int Labels::m_min() const { return *std::min_element(sizes_.begin(), sizes_.end()); }

int Labels::m_max() const { return *std::max_element(sizes_.begin(), sizes_.end()); }

std::vector<double> Labels::proportions() const {
  std::vector<double> pi(sizes_.size());
  for (std::size_t k = 0; k < sizes_.size(); ++k) pi[k] = static_cast<double>(sizes_[k]) / n();
  return pi;
}

std::vector<int> Labels::members(int k) const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i) {
    if ((*this)[i] == k) out.push_back(i);
  }
  return out;
}

Labels Labels::canonical() const {
  std::vector<int> remap(static_cast<std::size_t>(r_), -1);
  int next = 0;
  std::vector<int> z(assignments_.size());
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    int& target = remap[static_cast<std::size_t>(assignments_[i])];
    if (target < 0) target = next++;
    z[i] = target;
  }
  return Labels(std::move(z), r_);
}

SbmParams::SbmParams(Eigen::MatrixXd b) : b_(std::move(b)) {
  if (b_.rows() == 0 || b_.rows() != b_.cols()) throw ParameterError("B must be a non-empty square matrix");
  for (Eigen::Index k = 0; k < b_.rows(); ++k) {
    for (Eigen::Index l = 0; l < b_.cols(); ++l) {
      const double v = b_(k, l);
      if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("B entries must lie in [0, 1]");
      if (std::abs(v - b_(l, k)) > 1e-12) throw ParameterError("B must be symmetric");
    }
  }
}

Eigen::VectorXd SbmParams::within_rescaled(int n) const { return n * b_.diagonal(); }

Eigen::VectorXd SbmParams::across_rescaled(int n) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(r());
  for (int k = 0; k < r(); ++k) {
    double best = 0.0;
    for (int l = 0; l < r(); ++l) {
      if (l != k) best = std::max(best, b_(k, l));
    }
    out(k) = n * best;
  }
  return out;
}

Eigen::MatrixXd SbmParams::expected_adjacency(const Labels& labels) const {
  if (labels.r() > r()) throw DimensionError("labels use more clusters than B has rows");
  const int n = labels.n();
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(i, j) = i == j ? 0.0 : b_(labels[i], labels[j]);
  }
  return p;
}

MixtureParams::MixtureParams(std::vector<Eigen::VectorXd> means, std::vector<double> sigmas,
                             std::vector<double> psis)
    : means_(std::move(means)), sigmas_(std::move(sigmas)), psis_(std::move(psis)) {
  if (means_.empty()) throw ParameterError("mixture needs at least one component");
  if (sigmas_.size() != means_.size()) throw ParameterError("one sigma per component required");
  if (psis_.empty()) psis_ = sigmas_;
  if (psis_.size() != means_.size()) throw ParameterError("one psi per component required");
  const auto dim = means_.front().size();
  if (dim < 1) throw ParameterError("means must have dimension >= 1");
  for (const auto& mu : means_) {
    if (mu.size() != dim) throw ParameterError("means must share one dimension");
    if (!mu.allFinite()) throw ParameterError("means must be finite");
  }
  // sigma = 0 gives noiseless sampling.
  for (double s : sigmas_) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ParameterError("sigma must be non-negative and finite");
  }
  for (double s : psis_) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ParameterError("psi must be non-negative and finite");
  }
}

double MixtureParams::distance(int k, int l) const {
  return (means_[static_cast<std::size_t>(k)] - means_[static_cast<std::size_t>(l)]).norm();
}

double MixtureParams::d_min() const {
  if (r() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < r(); ++k) {
    for (int l = k + 1; l < r(); ++l) best = std::min(best, distance(k, l));
  }
  return best;
}

double MixtureParams::psi_max() const { return *std::max_element(psis_.begin(), psis_.end()); }

const char* to_string(Assortativity a) noexcept {
  switch (a) {
    case Assortativity::kStrong:
      return "strong";
    case Assortativity::kWeak:
      return "weak";
    case Assortativity::kNone:
      return "none";
  }
  return "none";
}

ClusteringMatrix ground_truth_matrix(const Labels& labels) {
  const int n = labels.n();
  ClusteringMatrix x = ClusteringMatrix::Zero(n, n);
  const auto& m = labels.sizes();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (labels[i] == labels[j]) x(i, j) = 1.0 / m[static_cast<std::size_t>(labels[i])];
    }
  }
  return x;
}

Assortativity classify_assortativity(const SbmParams& params) {
  const auto& b = params.matrix();
  const int r = params.r();
  bool weak = true;
  double min_diag = std::numeric_limits<double>::infinity();
  double max_off = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < r; ++k) {
    min_diag = std::min(min_diag, b(k, k));
    for (int l = 0; l < r; ++l) {
      if (l == k) continue;
      max_off = std::max(max_off, b(k, l));
      if (!(b(k, k) > b(k, l))) weak = false;
    }
  }
  if (!weak) return Assortativity::kNone;
  return min_diag > max_off ? Assortativity::kStrong : Assortativity::kWeak;
}

double average_edge_variance(const SbmParams& params, const Labels& labels) {
  if (labels.r() > params.r()) throw DimensionError("labels use more clusters than B has rows");
  const int n = labels.n();
  if (n < 2) return 0.0;
  const auto& b = params.matrix();
  const auto& m = labels.sizes();
  double total = 0.0;
  for (int k = 0; k < labels.r(); ++k) {
    const double mk = m[static_cast<std::size_t>(k)];
    total += 0.5 * mk * (mk - 1.0) * b(k, k) * (1.0 - b(k, k));
    for (int l = k + 1; l < labels.r(); ++l) {
      total += mk * m[static_cast<std::size_t>(l)] * b(k, l) * (1.0 - b(k, l));
    }
  }
  return 2.0 * total / (n - 1.0);
}

}  // namespace covsdp
