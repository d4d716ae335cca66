#include "intricacy/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "intricacy/rng.hpp"

namespace intricacy {

namespace {

void check_alphabet(int d, int n) {
  if (d < 2) throw ValidationError("alphabet size d must be at least 2, got " + std::to_string(d));
  if (n < 0) throw ValidationError("system size N must be nonnegative, got " + std::to_string(n));
}

// Returns the total mass after checking every entry and the normalization.
double checked_total_mass(std::span<const double> masses) {
  double total = 0.0;
  for (double p : masses) {
    if (!std::isfinite(p)) throw ValidationError("probability is not finite");
    if (p < 0.0) {
      std::ostringstream msg;
      msg << "negative probability " << p;
      throw ValidationError(msg.str());
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "total mass " << total << " differs from 1 by more than " << kMassTolerance;
    throw ValidationError(msg.str());
  }
  return total;
}

void check_subset(const SystemLaw& law, SubsetMask subset) {
  if (!subset.fits(law.n())) {
    throw std::out_of_range("subset references coordinates beyond N = " + std::to_string(law.n()));
  }
}

bool lexicographic_less(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// d^k without overflow, or 0 when it does not fit in 64 bits.
std::uint64_t power_or_zero(int d, int k) {
  std::uint64_t value = 1;
  for (int i = 0; i < k; ++i) {
    if (value > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d)) return 0;
    value *= static_cast<std::uint64_t>(d);
  }
  return value;
}

// Pushforward of weighted points onto the coordinates in `coords`.
// Output points are sorted and distinct.
WeightedPoints project(const WeightedPoints& points, int d, const std::vector<int>& coords) {
  const int k = static_cast<int>(coords.size());
  WeightedPoints out;
  out.n = k;
  const std::size_t count = points.size();
  if (count == 0) return out;

  if (const std::uint64_t radix = power_or_zero(d, k); radix != 0) {
    std::vector<std::pair<std::uint64_t, double>> keyed(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto pt = points.point(i);
      std::uint64_t key = 0;
      for (int c : coords) key = key * static_cast<std::uint64_t>(d) + pt[static_cast<std::size_t>(c)];
      keyed[i] = {key, points.weights[i]};
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < count;) {
      std::size_t j = i;
      double mass = 0.0;
      while (j < count && keyed[j].first == keyed[i].first) mass += keyed[j++].second;
      const Configuration config = configuration_at(keyed[i].first, d, k);
      for (int s : config) out.symbols.push_back(static_cast<std::uint32_t>(s));
      out.weights.push_back(mass);
      i = j;
    }
    return out;
  }

  std::vector<std::uint32_t> gathered(count * static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < count; ++i) {
    const auto pt = points.point(i);
    for (int j = 0; j < k; ++j) gathered[i * k + j] = pt[static_cast<std::size_t>(coords[j])];
  }
  auto row = [&](std::size_t i) {
    return std::span<const std::uint32_t>(gathered.data() + i * k, static_cast<std::size_t>(k));
  };
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lexicographic_less(row(a), row(b)); });
  for (std::size_t i = 0; i < count;) {
    std::size_t j = i;
    double mass = 0.0;
    while (j < count && std::ranges::equal(row(order[j]), row(order[i]))) {
      mass += points.weights[order[j++]];
    }
    const auto r = row(order[i]);
    out.symbols.insert(out.symbols.end(), r.begin(), r.end());
    out.weights.push_back(mass);
    i = j;
  }
  return out;
}

// Sum out every axis not in `subset` from a dense mixed-radix table.
std::vector<double> sum_out_axes(std::span<const double> table, int d, int n, SubsetMask subset) {
  std::vector<double> current(table.begin(), table.end());
  int remaining = n;
  // Highest coordinate first so that the positions of lower ones do not move.
  for (int axis = n - 1; axis >= 0; --axis) {
    if (subset.contains(axis)) continue;
    const std::size_t inner = power_or_zero(d, n - 1 - axis - (n - remaining));
    const std::size_t outer = current.size() / (inner * static_cast<std::size_t>(d));
    std::vector<double> next(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
      for (int a = 0; a < d; ++a) {
        const double* src = current.data() + (o * d + a) * inner;
        double* dst = next.data() + o * inner;
        for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i];
      }
    }
    current.swap(next);
    --remaining;
  }
  return current;
}

std::uint64_t binomial_saturating(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 value = 1;
  for (int i = 1; i <= k; ++i) {
    value = value * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (value > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(value);
}

}  // namespace

std::vector<int> SubsetMask::indices() const {
  std::vector<int> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

std::uint64_t checked_power(int d, int n, std::uint64_t limit) {
  const std::uint64_t value = power_or_zero(d, n);
  if (value == 0 || value > limit) {
    std::ostringstream msg;
    msg << d << "^" << n << " exceeds the support cap of " << limit;
    throw SizeError(msg.str());
  }
  return value;
}

std::uint64_t configuration_index(std::span<const std::uint32_t> symbols, int d) {
  std::uint64_t index = 0;
  for (std::uint32_t s : symbols) index = index * static_cast<std::uint64_t>(d) + s;
  return index;
}

Configuration configuration_at(std::uint64_t index, int d, int n) {
  Configuration config(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    config[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::uint64_t>(d));
    index /= static_cast<std::uint64_t>(d);
  }
  return config;
}

SystemLaw SystemLaw::dense(int d, int n, std::vector<double> probabilities) {
  check_alphabet(d, n);
  const std::uint64_t expected = power_or_zero(d, n);
  if (expected == 0 || probabilities.size() != expected) {
    throw ValidationError("dense table must hold d^N = " + std::to_string(expected) +
                          " probabilities, got " + std::to_string(probabilities.size()));
  }
  const double total = checked_total_mass(probabilities);
  for (double& p : probabilities) p /= total;
  SystemLaw law;
  law.d_ = d;
  law.n_ = n;
  law.dense_ = true;
  law.dense_table_ = std::move(probabilities);
  return law;
}

SystemLaw SystemLaw::sparse(int d, int n,
                            const std::vector<std::pair<Configuration, double>>& support) {
  check_alphabet(d, n);
  WeightedPoints points;
  points.n = n;
  for (const auto& [config, p] : support) {
    if (static_cast<int>(config.size()) != n) {
      throw ValidationError("configuration length " + std::to_string(config.size()) +
                            " differs from N = " + std::to_string(n));
    }
    for (int s : config) {
      if (s < 0 || s >= d) {
        throw ValidationError("symbol " + std::to_string(s) + " outside {0,...," +
                              std::to_string(d - 1) + "}");
      }
      points.symbols.push_back(static_cast<std::uint32_t>(s));
    }
    points.weights.push_back(p);
  }
  return from_points(d, std::move(points), false);
}

SystemLaw SystemLaw::from_points(int d, WeightedPoints points, bool merge_duplicates) {
  check_alphabet(d, points.n);
  const std::size_t count = points.weights.size();
  if (points.symbols.size() != count * static_cast<std::size_t>(points.n)) {
    throw ValidationError("flattened symbol array does not match the point count");
  }
  for (std::uint32_t s : points.symbols) {
    if (s >= static_cast<std::uint32_t>(d)) {
      throw ValidationError("symbol " + std::to_string(s) + " outside {0,...," +
                            std::to_string(d - 1) + "}");
    }
  }
  const double total = checked_total_mass(points.weights);

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lexicographic_less(points.point(a), points.point(b));
  });

  WeightedPoints sorted;
  sorted.n = points.n;
  for (std::size_t i = 0; i < count;) {
    std::size_t j = i + 1;
    double mass = points.weights[order[i]];
    while (j < count && std::ranges::equal(points.point(order[j]), points.point(order[i]))) {
      if (!merge_duplicates) throw ValidationError("sparse support repeats a configuration");
      mass += points.weights[order[j++]];
    }
    if (mass > 0.0) {
      const auto pt = points.point(order[i]);
      sorted.symbols.insert(sorted.symbols.end(), pt.begin(), pt.end());
      sorted.weights.push_back(mass / total);
    }
    i = j;
  }

  SystemLaw law;
  law.d_ = d;
  law.n_ = points.n;
  law.dense_ = false;
  law.points_ = std::move(sorted);
  return law;
}

WeightedPoints SystemLaw::support() const {
  if (!dense_) return points_;
  WeightedPoints out;
  out.n = n_;
  for (std::size_t idx = 0; idx < dense_table_.size(); ++idx) {
    if (dense_table_[idx] <= 0.0) continue;
    for (int s : configuration_at(idx, d_, n_)) out.symbols.push_back(static_cast<std::uint32_t>(s));
    out.weights.push_back(dense_table_[idx]);
  }
  return out;
}

std::size_t SystemLaw::support_size() const {
  if (!dense_) return points_.size();
  return static_cast<std::size_t>(
      std::count_if(dense_table_.begin(), dense_table_.end(), [](double p) { return p > 0.0; }));
}

SystemLaw SystemLaw::to_dense(std::uint64_t max_entries) const {
  if (dense_) return *this;
  std::vector<double> table(checked_power(d_, n_, max_entries), 0.0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    table[configuration_index(points_.point(i), d_)] += points_.weights[i];
  }
  return dense(d_, n_, std::move(table));
}

SystemLaw SystemLaw::permute_coordinates(std::span<const int> sigma) const {
  std::vector<int> check(sigma.begin(), sigma.end());
  std::sort(check.begin(), check.end());
  for (int i = 0; i < n_; ++i) {
    if (static_cast<int>(check.size()) != n_ || check[static_cast<std::size_t>(i)] != i) {
      throw std::invalid_argument("sigma is not a permutation of {0,...,N-1}");
    }
  }
  WeightedPoints src = support();
  WeightedPoints out;
  out.n = n_;
  out.weights = src.weights;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto pt = src.point(i);
    for (int j = 0; j < n_; ++j) out.symbols.push_back(pt[static_cast<std::size_t>(sigma[j])]);
  }
  SystemLaw result = from_points(d_, std::move(out), false);
  return dense_ ? result.to_dense(dense_table_.size()) : result;
}

SystemLaw SystemLaw::relabel_symbols(const std::vector<std::vector<int>>& relabelings) const {
  if (static_cast<int>(relabelings.size()) != n_) {
    throw std::invalid_argument("need one symbol relabeling per coordinate");
  }
  for (const auto& perm : relabelings) {
    std::vector<int> check(perm);
    std::sort(check.begin(), check.end());
    for (int s = 0; s < d_; ++s) {
      if (static_cast<int>(check.size()) != d_ || check[static_cast<std::size_t>(s)] != s) {
        throw std::invalid_argument("symbol relabeling is not a permutation of {0,...,d-1}");
      }
    }
  }
  WeightedPoints out = support();
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int j = 0; j < n_; ++j) {
      auto& s = out.symbols[i * n_ + j];
      s = static_cast<std::uint32_t>(relabelings[static_cast<std::size_t>(j)][s]);
    }
  }
  SystemLaw result = from_points(d_, std::move(out), false);
  return dense_ ? result.to_dense(dense_table_.size()) : result;
}

double entropy_of_masses(std::span<const double> masses) {
  double h = 0.0;
  for (double p : masses) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double entropy(const SystemLaw& law) {
  return law.is_dense() ? entropy_of_masses(law.dense_probabilities())
                        : entropy_of_masses(law.sparse_points().weights);
}

SystemLaw marginal(const SystemLaw& law, SubsetMask subset) {
  check_subset(law, subset);
  if (law.is_dense()) {
    return SystemLaw::dense(law.d(), subset.size(),
                            sum_out_axes(law.dense_probabilities(), law.d(), law.n(), subset));
  }
  return SystemLaw::from_points(law.d(), project(law.sparse_points(), law.d(), subset.indices()),
                                false);
}

double subset_entropy(const SystemLaw& law, SubsetMask subset) {
  check_subset(law, subset);
  if (subset.empty()) return 0.0;
  if (law.is_dense()) {
    return entropy_of_masses(sum_out_axes(law.dense_probabilities(), law.d(), law.n(), subset));
  }
  return entropy_of_masses(project(law.sparse_points(), law.d(), subset.indices()).weights);
}

double mutual_information(const SystemLaw& law, SubsetMask subset) {
  check_subset(law, subset);
  const SubsetMask rest = subset.complement(law.n());
  if (subset.empty() || rest.empty()) return 0.0;
  return subset_entropy(law, subset) + subset_entropy(law, rest) - entropy(law);
}

double conditional_entropy(const SystemLaw& law, SubsetMask subset) {
  check_subset(law, subset);
  return entropy(law) - subset_entropy(law, subset);
}

namespace {

// Depth-first walk over subsets. Each support point carries the label of its
// cell in the partition induced by X_S; adding coordinate i refines the
// partition by the symbol at i. Cost per subset is linear in the support.
class SubsetWalker {
 public:
  SubsetWalker(const WeightedPoints& points, int d,
               const std::function<void(SubsetMask, double)>& visit)
      : points_(points), d_(d), visit_(visit) {
    const std::size_t depth = static_cast<std::size_t>(points.n) + 1;
    labels_.assign(depth, std::vector<int>(points.size(), 0));
    counts_.assign(depth, 0);
    mass_.resize(points.size());
  }

  void run() {
    counts_[0] = points_.size() == 0 ? 0 : 1;
    visit_(SubsetMask{}, 0.0);
    descend(0, 0, 0);
  }

 private:
  void descend(std::size_t depth, std::uint64_t bits, int first) {
    for (int coord = first; coord < points_.n; ++coord) {
      refine(depth, coord);
      const std::uint64_t child = bits | (std::uint64_t{1} << coord);
      visit_(SubsetMask(child), cell_entropy(depth + 1));
      descend(depth + 1, child, coord + 1);
    }
  }

  void refine(std::size_t depth, int coord) {
    const auto& parent = labels_[depth];
    auto& child = labels_[depth + 1];
    const std::size_t count = points_.size();
    const std::size_t n = static_cast<std::size_t>(points_.n);
    const std::uint64_t cells = static_cast<std::uint64_t>(counts_[depth]) * d_;
    int next = 0;
    if (cells <= std::max<std::uint64_t>(4 * count, 1U << 16)) {
      table_.assign(cells, -1);
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t key =
            static_cast<std::uint64_t>(parent[i]) * d_ + points_.symbols[i * n + coord];
        int& slot = table_[key];
        if (slot < 0) slot = next++;
        child[i] = slot;
      }
    } else {
      std::unordered_map<std::uint64_t, int> relabel;
      relabel.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t key =
            static_cast<std::uint64_t>(parent[i]) * d_ + points_.symbols[i * n + coord];
        auto [it, inserted] = relabel.try_emplace(key, next);
        if (inserted) ++next;
        child[i] = it->second;
      }
    }
    counts_[depth + 1] = next;
  }

  double cell_entropy(std::size_t depth) {
    const auto& labels = labels_[depth];
    const std::size_t cells = static_cast<std::size_t>(counts_[depth]);
    std::fill(mass_.begin(), mass_.begin() + static_cast<std::ptrdiff_t>(cells), 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) mass_[static_cast<std::size_t>(labels[i])] += points_.weights[i];
    return entropy_of_masses(std::span<const double>(mass_.data(), cells));
  }

  const WeightedPoints& points_;
  const int d_;
  const std::function<void(SubsetMask, double)>& visit_;
  std::vector<std::vector<int>> labels_;
  std::vector<int> counts_;
  std::vector<int> table_;
  std::vector<double> mass_;
};

void check_exhaustive_cap(int n, const Caps& caps) {
  if (n > caps.max_exhaustive_n || n >= 63) {
    throw SizeError("N = " + std::to_string(n) + " exceeds the exhaustive subset cap of " +
                    std::to_string(caps.max_exhaustive_n) +
                    "; use the sampled profile instead");
  }
}

}  // namespace

void for_each_subset_entropy(const SystemLaw& law, const Caps& caps,
                             const std::function<void(SubsetMask, double)>& visit) {
  check_exhaustive_cap(law.n(), caps);
  const WeightedPoints points = law.support();
  SubsetWalker(points, law.d(), visit).run();
}

std::vector<double> subset_entropy_table(const SystemLaw& law, const Caps& caps) {
  check_exhaustive_cap(law.n(), caps);
  std::vector<double> table(std::size_t{1} << law.n(), 0.0);
  for_each_subset_entropy(law, caps, [&](SubsetMask s, double h) { table[s.bits()] = h; });
  return table;
}

std::vector<std::string> EntropyProfile::gamma_violations(double tol) const {
  std::vector<std::string> problems;
  if (values.size() != static_cast<std::size_t>(n) + 1) {
    problems.push_back("profile must have N+1 values");
    return problems;
  }
  if (std::abs(values[0]) > tol) problems.push_back("h(0) != 0");
  const double step = n > 0 ? 1.0 / n : 0.0;
  for (int k = 0; k < n; ++k) {
    const double inc = values[static_cast<std::size_t>(k) + 1] - values[static_cast<std::size_t>(k)];
    if (inc < -tol) problems.push_back("decreasing at k=" + std::to_string(k));
    if (inc > step + tol) problems.push_back("increment above 1/N at k=" + std::to_string(k));
  }
  return problems;
}

EntropyProfile profile_from_table(std::span<const double> subset_entropies, int n, int d) {
  if (subset_entropies.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("subset entropy table must hold 2^N entries");
  }
  std::vector<double> sums(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> counts(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::size_t mask = 0; mask < subset_entropies.size(); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    sums[k] += subset_entropies[mask];
    counts[k] += 1.0;
  }
  EntropyProfile profile{n, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0)};
  const double scale = n > 0 ? n * std::log(static_cast<double>(d)) : 1.0;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k) {
    profile.values[k] = sums[k] / counts[k] / scale;
  }
  return profile;
}

EntropyProfile entropy_profile_exact(const SystemLaw& law, const Caps& caps) {
  const int n = law.n();
  std::vector<double> sums(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> counts(static_cast<std::size_t>(n) + 1, 0.0);
  for_each_subset_entropy(law, caps, [&](SubsetMask s, double h) {
    sums[static_cast<std::size_t>(s.size())] += h;
    counts[static_cast<std::size_t>(s.size())] += 1.0;
  });
  EntropyProfile profile{n, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0)};
  const double scale = n > 0 ? n * std::log(static_cast<double>(law.d())) : 1.0;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k) {
    profile.values[k] = sums[k] / counts[k] / scale;
  }
  return profile;
}

SampledProfile entropy_profile_sampled(const SystemLaw& law, std::span<const int> sizes,
                                       int samples_per_size, std::uint64_t seed,
                                       bool exhaustive_when_possible) {
  if (samples_per_size < 2) throw std::invalid_argument("samples_per_size must be at least 2");
  const int n = law.n();
  const double scale = n > 0 ? n * std::log(static_cast<double>(law.d())) : 1.0;
  Rng rng(seed);
  SampledProfile out;
  out.n = n;
  for (int k : sizes) {
    if (k < 0 || k > n) throw std::out_of_range("subset size outside [0, N]");
    out.sizes.push_back(k);
    const std::uint64_t total = binomial_saturating(n, k);
    if (exhaustive_when_possible && n < 64 && total <= static_cast<std::uint64_t>(samples_per_size)) {
      double sum = 0.0;
      if (k == 0) {
        sum = 0.0;
      } else {
        // Gosper's hack: all n-bit words with exactly k bits set.
        std::uint64_t mask = (std::uint64_t{1} << k) - 1;
        const std::uint64_t limit = std::uint64_t{1} << n;
        while (mask < limit) {
          sum += subset_entropy(law, SubsetMask(mask));
          const std::uint64_t low = mask & (0 - mask);
          const std::uint64_t ripple = mask + low;
          mask = (((ripple ^ mask) >> 2) / low) | ripple;
        }
      }
      out.mean.push_back(sum / static_cast<double>(total) / scale);
      out.standard_error.push_back(0.0);
      out.exhaustive.push_back(true);
      continue;
    }
    std::vector<double> draws(static_cast<std::size_t>(samples_per_size));
    for (auto& h : draws) {
      h = subset_entropy(law, SubsetMask::of(rng.sample_indices(n, k))) / scale;
    }
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / samples_per_size;
    double ss = 0.0;
    for (double h : draws) ss += (h - mean) * (h - mean);
    out.mean.push_back(mean);
    out.standard_error.push_back(std::sqrt(ss / (samples_per_size - 1) / samples_per_size));
    out.exhaustive.push_back(false);
  }
  return out;
}

}  // namespace intricacy
