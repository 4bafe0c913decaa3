#pragma once

#include "covsdp/model.hpp"

namespace covsdp {

/// Mutual information over sqrt(H(a) H(b)), natural log. If either labeling
/// has zero entropy the result is 0, except 1 when both are constant.
/// Throws DimensionError on length mismatch.
double nmi(const Labels& a, const Labels& b);

/// Largest label permutations enumerated by accuracy().
inline constexpr int kMaxAccuracyClusters = 8;

/// max over permutations pi of (1/n) #{i : pi(a_i) = b_i}. When the two
/// labelings use different cluster counts the smaller one is padded with
/// unused labels. Throws DimensionError on length mismatch and
/// ParameterError above kMaxAccuracyClusters clusters.
double accuracy(const Labels& a, const Labels& b);

/// Nodes left unmatched by the best permutation: n (1 - accuracy).
int misclassified_count(const Labels& a, const Labels& b);

/// ||x_hat - x0||_F / ||x0||_F. Throws DimensionError on shape mismatch and
/// ParameterError when x0 is zero.
double relative_frobenius_error(const ClusteringMatrix& x_hat, const ClusteringMatrix& x0);

/// 64 m_max ||x_hat - x0||_F^2, an upper bound on the nodes misclassified by
/// spectral rounding of x_hat.
double misclassification_bound(const ClusteringMatrix& x_hat, const ClusteringMatrix& x0, int m_max);

}  // namespace covsdp
