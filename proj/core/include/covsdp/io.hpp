#pragma once

#include "covsdp/model.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covsdp {

/// Shortest decimal string that reads back to exactly the same double
/// ('.' decimal point, no locale). Non-finite values become "nan", "inf", "-inf".
std::string format_double(double v);

struct EdgeListOptions {
  // Keep orientation (G_ij = 1 for a line "i j") instead of symmetrizing.
  bool directed = false;
  // Node count; inferred as max index + 1 when absent.
  std::optional<int> nodes;
};

/// One "src dst" pair of 0-based integers per line; text after '#' and blank
/// lines are ignored, except that a line "# nodes N" declares the node count
/// when options.nodes is unset. Undirected output is symmetric with a zero
/// diagonal; duplicate lines collapse to one edge. Throws DataError if the file cannot
/// be read, ParseError for a malformed line and IndexError for an index
/// outside [0, nodes).
Eigen::MatrixXd load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {});

/// Writes "i j" lines (i < j unless directed), a "# nodes N" comment first so
/// isolated trailing nodes survive a round trip.
void save_edge_list(const std::filesystem::path& path, const Eigen::MatrixXd& a, bool directed = false);

/// Comma-separated numeric table with one header row; row i is node i.
/// Throws ParseError for an empty or non-numeric cell and DataError for rows
/// whose length differs from the header.
CovariateMatrix load_covariates_csv(const std::filesystem::path& path, bool standardize = false);

/// Header "x0,x1,..." then one row per node.
void save_covariates_csv(const std::filesystem::path& path, const CovariateMatrix& y);

/// One label token per line (blank lines and '#' comments skipped); tokens
/// are mapped to 0, 1, ... in order of first appearance.
Labels load_labels(const std::filesystem::path& path);

void save_labels(const std::filesystem::path& path, const Labels& labels);

/// A = 1(G G^T >= tau) with the diagonal set to 0. (G G^T)_ij counts the
/// common out-neighbours of i and j. Throws ParameterError unless tau >= 1
/// and G is a square 0/1 matrix.
AdjacencyMatrix threshold_symmetrize(const Eigen::MatrixXd& g, int tau = 5);

/// Natural log of every mass, standardized to mean 0 and unit population
/// standard deviation; returns an n x 1 matrix. Throws ParameterError for a
/// non-positive mass.
CovariateMatrix log_mass_normalize(std::span<const double> masses);

struct Dataset {
  AdjacencyMatrix a;
  CovariateMatrix y;
  std::optional<Labels> truth;

  /// Throws DimensionError unless a is n x n and y, truth have n rows.
  void validate() const;
};

}  // namespace covsdp
