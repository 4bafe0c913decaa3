#include "covsdp/metrics.hpp"

#include "covsdp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace covsdp {

namespace {

Eigen::MatrixXd contingency(const Labels& a, const Labels& b, int ra, int rb) {
  if (a.n() != b.n()) throw DimensionError("labelings must cover the same nodes");
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(ra, rb);
  for (int i = 0; i < a.n(); ++i) table(a[i], b[i]) += 1.0;
  return table;
}

double entropy(const Eigen::VectorXd& counts, double n) {
  double h = 0.0;
  for (Eigen::Index k = 0; k < counts.size(); ++k) {
    if (counts(k) > 0.0) {
      const double p = counts(k) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

double nmi(const Labels& a, const Labels& b) {
  const Eigen::MatrixXd table = contingency(a, b, a.r(), b.r());
  const double n = a.n();
  const Eigen::VectorXd row = table.rowwise().sum();
  const Eigen::VectorXd col = table.colwise().sum().transpose();
  const double ha = entropy(row, n);
  const double hb = entropy(col, n);
  if (ha <= 0.0 || hb <= 0.0) return (ha <= 0.0 && hb <= 0.0) ? 1.0 : 0.0;
  double mi = 0.0;
  for (Eigen::Index k = 0; k < table.rows(); ++k) {
    for (Eigen::Index l = 0; l < table.cols(); ++l) {
      const double c = table(k, l);
      if (c > 0.0) mi += c / n * std::log(c * n / (row(k) * col(l)));
    }
  }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

int misclassified_count(const Labels& a, const Labels& b) {
  const int r = std::max(a.r(), b.r());
  if (r > kMaxAccuracyClusters) throw ParameterError("accuracy enumerates permutations only up to 8 clusters");
  const Eigen::MatrixXd table = contingency(a, b, r, r);
  std::vector<int> perm(static_cast<std::size_t>(r));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double matched = 0.0;
    for (int k = 0; k < r; ++k) matched += table(k, perm[static_cast<std::size_t>(k)]);
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return a.n() - static_cast<int>(std::lround(best));
}

double accuracy(const Labels& a, const Labels& b) {
  return 1.0 - static_cast<double>(misclassified_count(a, b)) / a.n();
}

double relative_frobenius_error(const ClusteringMatrix& x_hat, const ClusteringMatrix& x0) {
  if (x_hat.rows() != x0.rows() || x_hat.cols() != x0.cols()) throw DimensionError("matrices differ in shape");
  const double denom = x0.norm();
  if (!(denom > 0.0)) throw ParameterError("reference matrix has zero norm");
  return (x_hat - x0).norm() / denom;
}

double misclassification_bound(const ClusteringMatrix& x_hat, const ClusteringMatrix& x0, int m_max) {
  if (x_hat.rows() != x0.rows() || x_hat.cols() != x0.cols()) throw DimensionError("matrices differ in shape");
  return 64.0 * m_max * (x_hat - x0).squaredNorm();
}

}  // namespace covsdp
