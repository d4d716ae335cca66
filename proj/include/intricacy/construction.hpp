#pragma once

// Sparse random support construction: the empirical measure of d^M i.i.d.
// uniform draws from {0,...,d-1}^N, and the exact expected entropy of its
// k-coordinate marginals.

#include <cstdint>
#include <string>
#include <vector>

#include "intricacy/coefficients.hpp"
#include "intricacy/information.hpp"

namespace intricacy {

struct ConstructionSpec {
  int d = 2;
  int n = 1;
  int m = 0;
  std::uint64_t seed = 0;
};

/// floor(x N), robust to x N landing a rounding error below an integer.
int m_from_target(double x, int n);

/// Draws d^M configurations, coordinate by coordinate with Rng::below(d),
/// from a stream seeded with spec.seed; colliding draws add their weights.
/// Throws SizeError when d^M exceeds caps.max_support.
SystemLaw sample_sparse_system(const ConstructionSpec& spec, const Caps& caps = {});

struct ExpectedEntropy {
  /// h_k in units of log d.
  double value = 0.0;
  /// Binomial mass left out of the summation (0 unless truncated).
  double neglected_mass = 0.0;
};

inline constexpr double kExactSummationLimit = 1e6;

/// Expected entropy of k coordinates of the construction, E H(X_{1..k}) /
/// log d, with B ~ Binomial(d^M, d^-k):
///   k <= M:  k + E phi(B d^(k-M))
///   k >  M:  M + d^(k-M) E phi(B),       phi(x) = -x log x / log d.
/// Sums the binomial exactly while d^M <= 1e6; above that the range is cut
/// to mean +- 12 standard deviations (SizeError if allow_truncation is off).
ExpectedEntropy expected_subset_entropy(int d, int n, int m, int k, bool allow_truncation = true);

struct Envelope {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double h, double tol = 0.0) const { return h >= lower - tol && h <= upper + tol; }
};

/// (k - 2 d^((k-M)/2), k) for k <= M, (M - d^(M-k), M) for k > M; log d units.
Envelope flora_envelope(int d, int m, int k);

struct FamilyIntricacy {
  std::string family;
  double normalized_intricacy = 0.0;
};

struct RealizedProfile {
  EntropyProfile profile;
  double normalized_entropy = 0.0;
  std::size_t support_size = 0;
  std::vector<FamilyIntricacy> intricacies;
};

/// Samples the construction and evaluates its exact profile (N within the
/// exhaustive cap) or, past the cap, a sampled estimate at every k with
/// samples_per_size subsets each.
RealizedProfile realized_profile(const ConstructionSpec& spec, const std::vector<Family>& families,
                                 const Caps& caps = {}, int samples_per_size = 200);

}  // namespace intricacy
