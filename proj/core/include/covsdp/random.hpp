#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace covsdp {

/// Portable seeded generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the variate transforms below are
/// implemented here because std::*_distribution output differs between
/// standard library vendors.
///
///   uniform(): top 53 bits of one engine draw, times 2^-53, in [0, 1).
///   normal():  Marsaglia polar method on 2u-1 pairs; the second variate of
///              each accepted pair is cached and returned by the next call.
///   below(n):  rejection sampling on the top bits (no modulo bias).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  std::uint64_t below(std::uint64_t n);

  // Fisher-Yates shuffle of 0..n-1, drawing j = below(i + 1) for i = n-1..1.
  std::vector<int> permutation(int n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Splitting rule for independent streams:
///   derive_seed(base, stream) = splitmix64(base + 0x9E3779B97F4A7C15 * (stream + 1)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace covsdp
