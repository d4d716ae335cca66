#pragma once

// Exact entropy, marginals and mutual information for finite systems of
// discrete random variables X = (X_1, ..., X_N), each valued in {0, ..., d-1}.
//
// All entropies are in nats. "Normalized" quantities divide by N * log(d).

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace intricacy {

/// A law or table violates one of its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configurable computation cap (subset enumeration, support size) was hit.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr double kMassTolerance = 1e-9;

struct Caps {
  /// Largest N for which the 2^N subsets are enumerated exhaustively.
  int max_exhaustive_n = 22;
  /// Largest number of support points (dense table size or d^M draws).
  std::uint64_t max_support = std::uint64_t{1} << 20;
};

using Configuration = std::vector<int>;

/// Subset S of the coordinates. Bit i stands for coordinate i+1.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint64_t bits) : bits_(bits) {}

  static SubsetMask full(int n) {
    return SubsetMask(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  /// Build from zero-based coordinate indices.
  static SubsetMask of(std::initializer_list<int> indices) {
    std::uint64_t bits = 0;
    for (int i : indices) bits |= std::uint64_t{1} << i;
    return SubsetMask(bits);
  }
  static SubsetMask of(std::span<const int> indices) {
    std::uint64_t bits = 0;
    for (int i : indices) bits |= std::uint64_t{1} << i;
    return SubsetMask(bits);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1U; }
  constexpr bool fits(int n) const { return n >= 64 || (bits_ >> n) == 0; }
  SubsetMask complement(int n) const { return SubsetMask(full(n).bits_ & ~bits_); }
  std::vector<int> indices() const;

  friend constexpr bool operator==(SubsetMask, SubsetMask) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Flattened list of weighted configurations: symbols of point i occupy
/// [i*n, (i+1)*n).
struct WeightedPoints {
  int n = 0;
  std::vector<std::uint32_t> symbols;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const std::uint32_t> point(std::size_t i) const {
    return {symbols.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
};

/// A probability measure on {0,...,d-1}^N, stored either as a dense
/// mixed-radix table (coordinate 1 is the most significant digit) or as a
/// sparse list of distinct weighted configurations. Immutable once built.
class SystemLaw {
 public:
  /// Throws ValidationError unless probabilities has d^N nonnegative entries
  /// whose sum is within kMassTolerance of 1. The table is renormalized.
  static SystemLaw dense(int d, int n, std::vector<double> probabilities);

  /// Throws ValidationError on repeated configurations, out-of-range symbols,
  /// negative masses or total mass off by more than kMassTolerance.
  static SystemLaw sparse(int d, int n,
                          const std::vector<std::pair<Configuration, double>>& support);

  /// Sparse law from flattened points; repeated configurations are merged
  /// by adding their weights when merge_duplicates is set, rejected otherwise.
  static SystemLaw from_points(int d, WeightedPoints points, bool merge_duplicates);

  int d() const { return d_; }
  int n() const { return n_; }
  bool is_dense() const { return dense_; }

  /// Dense table (empty for sparse laws).
  std::span<const double> dense_probabilities() const { return dense_table_; }
  /// Sparse support, sorted lexicographically (empty for dense laws).
  const WeightedPoints& sparse_points() const { return points_; }

  /// Points with positive mass, whatever the representation.
  WeightedPoints support() const;
  std::size_t support_size() const;

  /// Dense copy of this law. Throws SizeError if d^N exceeds the cap.
  SystemLaw to_dense(std::uint64_t max_entries = Caps{}.max_support) const;

  /// Law of (X_{sigma(1)}, ..., X_{sigma(N)}) given the zero-based
  /// permutation sigma, and law of (pi_1(X_1), ..., pi_N(X_N)).
  SystemLaw permute_coordinates(std::span<const int> sigma) const;
  SystemLaw relabel_symbols(const std::vector<std::vector<int>>& relabelings) const;

 private:
  SystemLaw() = default;

  int d_ = 2;
  int n_ = 0;
  bool dense_ = false;
  std::vector<double> dense_table_;
  WeightedPoints points_;
};

/// d^n, or throws SizeError when it exceeds limit.
std::uint64_t checked_power(int d, int n, std::uint64_t limit);

/// Mixed-radix index of a configuration, coordinate 1 most significant.
std::uint64_t configuration_index(std::span<const std::uint32_t> symbols, int d);
Configuration configuration_at(std::uint64_t index, int d, int n);

/// -sum p log p over the support, with 0 log 0 = 0.
double entropy(const SystemLaw& law);
double entropy_of_masses(std::span<const double> masses);

/// Pushforward of law under projection onto the coordinates in S (kept in
/// increasing order). Throws std::out_of_range if S has a bit at or above N.
SystemLaw marginal(const SystemLaw& law, SubsetMask subset);

double subset_entropy(const SystemLaw& law, SubsetMask subset);

/// H(X_S) + H(X_{S^c}) - H(X); zero for S empty or full.
double mutual_information(const SystemLaw& law, SubsetMask subset);

/// H(X | X_S) = H(X) - H(X_S).
double conditional_entropy(const SystemLaw& law, SubsetMask subset);

/// Calls visit(mask, H(X_S)) for every subset S of {1,...,N}, including the
/// empty set, by refining the partition of the support one coordinate at a
/// time. Throws SizeError if N exceeds caps.max_exhaustive_n.
void for_each_subset_entropy(const SystemLaw& law, const Caps& caps,
                             const std::function<void(SubsetMask, double)>& visit);

/// H(X_S) for all 2^N masks, indexed by mask bits.
std::vector<double> subset_entropy_table(const SystemLaw& law, const Caps& caps = {});

/// Averaged normalized subset entropies h(k/N), k = 0..N.
struct EntropyProfile {
  int n = 0;
  std::vector<double> values;

  double at(int k) const { return values.at(static_cast<std::size_t>(k)); }
  double total() const { return values.back(); }

  /// Empty when the profile is in Gamma: h(0) = 0 and every increment lies
  /// in [0, 1/N] up to tol. Otherwise one message per violated condition.
  std::vector<std::string> gamma_violations(double tol = 1e-9) const;
};

EntropyProfile entropy_profile_exact(const SystemLaw& law, const Caps& caps = {});
EntropyProfile profile_from_table(std::span<const double> subset_entropies, int n, int d);

/// Monte Carlo estimate of h(k/N) at the requested sizes.
struct SampledProfile {
  int n = 0;
  std::vector<int> sizes;
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::vector<bool> exhaustive;
};

/// Draws samples_per_size uniform size-k subsets (independently, by partial
/// shuffle) for each k in sizes, in order, from one stream seeded by seed.
/// With exhaustive_when_possible, a size whose C(N,k) does not exceed
/// samples_per_size is enumerated instead, giving the exact average.
SampledProfile entropy_profile_sampled(const SystemLaw& law, std::span<const int> sizes,
                                       int samples_per_size, std::uint64_t seed,
                                       bool exhaustive_when_possible = false);

}  // namespace intricacy
