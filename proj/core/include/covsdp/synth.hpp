#pragma once

#include "covsdp/model.hpp"

#include <cstdint>

namespace covsdp {

/// Upper-triangle entries are independent Bernoulli(B_{z_i z_j}), visited
/// row-major (i < j), each consuming one uniform draw. Symmetric, zero diagonal.
AdjacencyMatrix sample_sbm(const SbmParams& b, const Labels& labels, std::uint64_t seed);

/// Y_i = mu_{z_i} + sigma_{z_i} w, w ~ N(0, I_d). Rows are filled in node
/// order, coordinates in order. Gaussian noise only.
CovariateMatrix sample_mixture(const MixtureParams& params, const Labels& labels, std::uint64_t seed);

}  // namespace covsdp
