#pragma once

#include "covsdp/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace covsdp {

/// K_ij = exp(-eta ||Y_i - Y_j||^2). eta = 0 yields the all-ones matrix.
/// Throws ParameterError for negative or non-finite eta.
KernelMatrix gaussian_kernel(const CovariateMatrix& y, double eta);

/// Sample quantile by linear interpolation between order statistics:
/// h = (n - 1) p, value = x_(floor h) + (h - floor h)(x_(floor h + 1) - x_(floor h)).
double quantile(std::vector<double> values, double p);

/// Value q with P(chi^2_d <= q) = p. Throws ParameterError unless 0 < p < 1, d >= 1.
double chi_square_quantile(double p, int d);

struct BandwidthOptions {
  // Fraction of neighbours kept inside the kernel range (per-point quantile).
  double near_fraction = 0.10;
  // Fraction of points for which that should hold (quantile over points).
  double coverage = 0.95;
};

/// Quantile-based scale heuristic. For every i, q_i is the near_fraction
/// quantile of {||Y_i - Y_j|| : j != i}; then
///   w   = quantile(q, coverage) / sqrt(chi_square_quantile(coverage, d_eff))
///   eta = 1 / (2 w^2).
/// Throws DegenerateData when w = 0 (e.g. all points identical).
double tune_bandwidth(const CovariateMatrix& y, int d_eff, const BandwidthOptions& options = {});

struct PcaSplit {
  // Rows of P2 projected on the basis, in increasing node order: n2 x (r-1).
  CovariateMatrix projected;
  // d x (r-1) top eigenvectors of the P1 sample covariance, descending.
  Eigen::MatrixXd basis;
  std::vector<int> p1;  // sorted
  std::vector<int> p2;  // sorted
};

/// n1 = floor(n / ln n) clamped to [2, n - 2].
int pca_split_size(int n);

/// Random split into P1 (size pca_split_size(n)) and P2; the covariance of
/// the P1 rows (centered by their own mean, divided by n1) gives the top r-1
/// eigenvectors, which project the P2 rows. Each basis column is signed so its
/// largest-magnitude entry is positive. Deterministic given the seed.
/// Throws ParameterError if n < 4 or r < 2, DimensionError if d < r - 1.
PcaSplit split_sample_pca(const CovariateMatrix& y, int r, std::uint64_t seed);

/// Projects every row of y on the basis: y * basis.
CovariateMatrix project_rows(const CovariateMatrix& y, const Eigen::MatrixXd& basis);

/// Columns shifted to mean 0 and scaled to unit population standard
/// deviation (divide by n). Constant columns become all zeros.
CovariateMatrix standardize_columns(const CovariateMatrix& y);

}  // namespace covsdp
