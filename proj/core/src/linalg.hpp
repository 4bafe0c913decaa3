#pragma once

#include <Eigen/Dense>

// Symmetric eigen-solvers backed by LAPACK dsyevr. Only the upper triangle of
// the input is read.
namespace covsdp::detail {

struct EigenPairs {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column j pairs with values(j)
};

// All eigenvalues, descending.
Eigen::VectorXd eigenvalues_descending(const Eigen::MatrixXd& s);

// Smallest eigenvalue.
double smallest_eigenvalue(const Eigen::MatrixXd& s);

// The k largest eigenpairs, descending.
EigenPairs top_eigenpairs(const Eigen::MatrixXd& s, int k);

// Eigenpairs with eigenvalue in the half-open interval (lo, hi], descending.
EigenPairs eigenpairs_in_range(const Eigen::MatrixXd& s, double lo, double hi);

// Frobenius projection onto the PSD cone. `positive_hint` is the expected
// number of positive eigenvalues; it only picks which side of the spectrum
// is decomposed and never changes the result beyond rounding. On return it
// holds the observed count.
Eigen::MatrixXd psd_part(const Eigen::MatrixXd& s, int& positive_hint);

}  // namespace covsdp::detail
