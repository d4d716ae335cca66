#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace intricacy {

/// Seeded random stream used for every stochastic operation in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard (the 10000th output of a default-constructed engine is
/// 9981545732273789042). The <random> distributions are implementation
/// defined, so bounded integers and doubles are derived here with explicit
/// arithmetic; a given seed yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). Unbiased (rejection of the short tail).
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double uniform();

  /// Exponential(1) variate by inversion.
  double exponential();

  /// The first k entries of a uniform random permutation of {0, ..., n-1},
  /// produced by a partial Fisher-Yates shuffle of the identity.
  std::vector<int> sample_indices(int n, int k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace intricacy
