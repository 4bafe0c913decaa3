#include "linalg.hpp"

#include "covsdp/error.hpp"

#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <vector>

namespace covsdp::detail {

namespace {

// Full divide-and-conquer decomposition cut down to the requested range. Used
// when MRRR gives up on tightly clustered eigenvalues.
EigenPairs dsyevd(const Eigen::MatrixXd& s, char jobz, char range, double vl, double vu, int il, int iu) {
  const auto n = static_cast<lapack_int>(s.rows());
  Eigen::MatrixXd a = s;
  Eigen::VectorXd w(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'U', n, a.data(), n, w.data());
  if (info != 0) throw NumericalError("dsyevd failed with info " + std::to_string(info));
  lapack_int first = 0;
  lapack_int last = n;  // ascending, half-open [first, last)
  if (range == 'I') {
    first = il - 1;
    last = iu;
  } else if (range == 'V') {
    while (first < n && w(first) <= vl) ++first;
    last = first;
    while (last < n && w(last) <= vu) ++last;
  }
  EigenPairs out;
  out.values = w.segment(first, last - first).reverse();
  if (jobz == 'V') out.vectors = a.middleCols(first, last - first).rowwise().reverse();
  return out;
}

// range: 'A' all, 'V' (vl, vu], 'I' il..iu (1-based, ascending order).
EigenPairs dsyevr(const Eigen::MatrixXd& s, char jobz, char range, double vl, double vu, int il, int iu) {
  const auto n = static_cast<lapack_int>(s.rows());
  EigenPairs out;
  if (n == 0) return out;
  Eigen::MatrixXd a = s;
  const lapack_int cols = range == 'I' ? iu - il + 1 : n;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, jobz == 'V' ? cols : 1);
  std::vector<lapack_int> support(static_cast<std::size_t>(2 * std::max<lapack_int>(1, cols)));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, jobz, range, 'U', n, a.data(), n, vl, vu, il, iu, LAPACKE_dlamch('S'),
                     &found, w.data(), z.data(), jobz == 'V' ? n : 1, support.data());
  if (info != 0) return dsyevd(s, jobz, range, vl, vu, il, iu);
  // dsyevr returns ascending order; flip to descending.
  out.values = w.head(found).reverse();
  if (jobz == 'V') out.vectors = z.leftCols(found).rowwise().reverse();
  return out;
}

}  // namespace

Eigen::VectorXd eigenvalues_descending(const Eigen::MatrixXd& s) { return dsyevr(s, 'N', 'A', 0, 0, 0, 0).values; }

double smallest_eigenvalue(const Eigen::MatrixXd& s) {
  const EigenPairs p = dsyevr(s, 'N', 'I', 0, 0, 1, 1);
  return p.values.size() > 0 ? p.values(0) : 0.0;
}

EigenPairs top_eigenpairs(const Eigen::MatrixXd& s, int k) {
  const auto n = static_cast<int>(s.rows());
  k = std::clamp(k, 0, n);
  if (k == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(n, 0)};
  return dsyevr(s, 'V', 'I', 0, 0, n - k + 1, n);
}

EigenPairs eigenpairs_in_range(const Eigen::MatrixXd& s, double lo, double hi) {
  return dsyevr(s, 'V', 'V', lo, hi, 0, 0);
}

Eigen::MatrixXd psd_part(const Eigen::MatrixXd& s, int& positive_hint) {
  const auto n = static_cast<int>(s.rows());
  // Any bound above the spectral radius works for the open end of the interval.
  const double bound = s.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  Eigen::MatrixXd out;
  if (positive_hint <= n / 2) {
    const EigenPairs pos = eigenpairs_in_range(s, 0.0, bound);
    positive_hint = static_cast<int>(pos.values.size());
    out.noalias() = pos.vectors * pos.values.asDiagonal() * pos.vectors.transpose();
  } else {
    const EigenPairs neg = eigenpairs_in_range(s, -bound, 0.0);
    positive_hint = n - static_cast<int>(neg.values.size());
    out = s;
    out.noalias() -= neg.vectors * neg.values.asDiagonal() * neg.vectors.transpose();
  }
  return 0.5 * (out + out.transpose());
}

}  // namespace covsdp::detail
