#include "covsdp/covariates.hpp"

#include "covsdp/error.hpp"
#include "covsdp/random.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>

namespace covsdp {

KernelMatrix gaussian_kernel(const CovariateMatrix& y, double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ParameterError("kernel scale eta must be finite and >= 0");
  const auto n = y.rows();
  KernelMatrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::exp(-eta * (y.row(i) - y.row(j)).squaredNorm());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ParameterError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double chi_square_quantile(double p, int d) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("chi-square quantile needs 0 < p < 1");
  if (d < 1) throw ParameterError("chi-square degrees of freedom must be >= 1");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(d), p);
}

double tune_bandwidth(const CovariateMatrix& y, int d_eff, const BandwidthOptions& options) {
  const auto n = y.rows();
  if (n < 2) throw ParameterError("bandwidth tuning needs at least two points");
  if (d_eff < 1) throw ParameterError("effective dimension must be >= 1");
  std::vector<double> q(static_cast<std::size_t>(n));
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    dist.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) dist.push_back((y.row(i) - y.row(j)).norm());
    }
    q[static_cast<std::size_t>(i)] = quantile(dist, options.near_fraction);
  }
  const double w = quantile(q, options.coverage) / std::sqrt(chi_square_quantile(options.coverage, d_eff));
  if (!(w > 0.0)) throw DegenerateData("bandwidth is zero: covariates are (nearly) identical");
  return 1.0 / (2.0 * w * w);
}

int pca_split_size(int n) {
  const int n1 = static_cast<int>(std::floor(n / std::log(static_cast<double>(n))));
  return std::clamp(n1, 2, n - 2);
}

PcaSplit split_sample_pca(const CovariateMatrix& y, int r, std::uint64_t seed) {
  const auto n = static_cast<int>(y.rows());
  const auto d = static_cast<int>(y.cols());
  if (n < 4) throw ParameterError("split-sample PCA needs n >= 4");
  if (r < 2) throw ParameterError("split-sample PCA needs r >= 2");
  if (d < r - 1) throw DimensionError("target dimension r-1 exceeds the covariate dimension");

  const int n1 = pca_split_size(n);
  Rng rng(seed);
  const std::vector<int> perm = rng.permutation(n);
  PcaSplit out;
  out.p1.assign(perm.begin(), perm.begin() + n1);
  out.p2.assign(perm.begin() + n1, perm.end());
  std::sort(out.p1.begin(), out.p1.end());
  std::sort(out.p2.begin(), out.p2.end());

  Eigen::MatrixXd sample(n1, d);
  for (int i = 0; i < n1; ++i) sample.row(i) = y.row(out.p1[static_cast<std::size_t>(i)]);
  const Eigen::RowVectorXd mean = sample.colwise().mean();
  sample.rowwise() -= mean;
  const Eigen::MatrixXd cov = (sample.transpose() * sample) / n1;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
  out.basis = es.eigenvectors().rightCols(r - 1).rowwise().reverse();
  for (int c = 0; c < r - 1; ++c) {
    Eigen::Index arg = 0;
    out.basis.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.basis(arg, c) < 0) out.basis.col(c) *= -1.0;
  }

  Eigen::MatrixXd rest(static_cast<Eigen::Index>(out.p2.size()), d);
  for (std::size_t i = 0; i < out.p2.size(); ++i) rest.row(static_cast<Eigen::Index>(i)) = y.row(out.p2[i]);
  out.projected = rest * out.basis;
  return out;
}

CovariateMatrix project_rows(const CovariateMatrix& y, const Eigen::MatrixXd& basis) {
  if (y.cols() != basis.rows()) throw DimensionError("basis does not match the covariate dimension");
  return y * basis;
}

CovariateMatrix standardize_columns(const CovariateMatrix& y) {
  CovariateMatrix out = y;
  const auto n = static_cast<double>(y.rows());
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    const double mean = y.col(c).mean();
    out.col(c).array() -= mean;
    const double sd = std::sqrt(out.col(c).squaredNorm() / n);
    if (sd > 0.0) {
      out.col(c) /= sd;
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

}  // namespace covsdp
