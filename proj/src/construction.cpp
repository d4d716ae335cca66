#include "intricacy/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "intricacy/intricacy.hpp"
#include "intricacy/rng.hpp"

namespace intricacy {

int m_from_target(double x, int n) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("target entropy x must lie in [0,1]");
  return std::min(n, static_cast<int>(std::floor(x * n + 1e-9)));
}

SystemLaw sample_sparse_system(const ConstructionSpec& spec, const Caps& caps) {
  if (spec.d < 2) throw ValidationError("d must be at least 2");
  if (spec.n < 1) throw ValidationError("N must be at least 1");
  if (spec.m < 0 || spec.m > spec.n) throw ValidationError("M must lie in [0, N]");
  const std::uint64_t draws = checked_power(spec.d, spec.m, caps.max_support);

  Rng rng(spec.seed);
  WeightedPoints points;
  points.n = spec.n;
  points.symbols.resize(draws * static_cast<std::uint64_t>(spec.n));
  for (auto& s : points.symbols) s = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(spec.d)));
  // Every draw carries d^-M.
  points.weights.assign(draws, 1.0 / static_cast<double>(draws));
  return SystemLaw::from_points(spec.d, std::move(points), true);
}

ExpectedEntropy expected_subset_entropy(int d, int n, int m, int k, bool allow_truncation) {
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  if (m < 0 || m > n) throw std::invalid_argument("M must lie in [0, N]");
  if (k < 0 || k > n) throw std::invalid_argument("k must lie in [0, N]");
  if (k == 0) return {};

  const double log_d = std::log(static_cast<double>(d));
  const double trials = static_cast<double>(checked_power(d, m, std::uint64_t{1} << 53));
  const double q = std::exp(-k * log_d);
  const double mean = trials * q;
  const double sd = std::sqrt(trials * q * (1.0 - q));
  auto phi = [&](double y) { return y > 0.0 ? -y * std::log(y) / log_d : 0.0; };

  double lo = 0.0;
  double hi = trials;
  const bool truncated = trials > kExactSummationLimit;
  if (truncated) {
    if (!allow_truncation) {
      throw SizeError("d^M exceeds the exact binomial summation limit; enable truncation");
    }
    lo = std::max(0.0, std::floor(mean - 12.0 * sd));
    hi = std::min(trials, std::ceil(mean + 12.0 * sd));
  }

  // Binomial weights relative to the mode by the ratio recursion
  // w(j+1)/w(j) = (n-j)/(j+1) * q/(1-q); normalizing by the summed weights
  // avoids the absolute error of log-gamma at large n.
  const double odds = q / (1.0 - q);
  const double mode = std::clamp(std::floor((trials + 1.0) * q), lo, hi);
  std::vector<double> weights(static_cast<std::size_t>(hi - lo) + 1, 0.0);
  auto at = [&](double j) -> double& { return weights[static_cast<std::size_t>(j - lo)]; };
  at(mode) = 1.0;
  for (double j = mode; j < hi && at(j) > 0.0; j += 1.0) at(j + 1.0) = at(j) * (trials - j) / (j + 1.0) * odds;
  for (double j = mode; j > lo && at(j) > 0.0; j -= 1.0) at(j - 1.0) = at(j) * j / ((trials - j + 1.0) * odds);
  double inside = 0.0;
  for (double w : weights) inside += w;

  // Mass beyond the window, walked out until the terms stop mattering.
  double outside = 0.0;
  if (truncated) {
    double w = at(hi);
    for (double j = hi; j < trials && w > 1e-300; j += 1.0) {
      w *= (trials - j) / (j + 1.0) * odds;
      outside += w;
      if (w < 1e-20 * inside) break;
    }
    w = at(lo);
    for (double j = lo; j > 0.0 && w > 1e-300; j -= 1.0) {
      w *= j / ((trials - j + 1.0) * odds);
      outside += w;
      if (w < 1e-20 * inside) break;
    }
  }
  const double total = inside + outside;
  const double neglected = outside / total;

  double correction = 0.0;
  if (k <= m) {
    const double scale = std::pow(static_cast<double>(d), k - m);
    for (double j = lo; j <= hi; j += 1.0) correction += at(j) / total * phi(j * scale);
    return {k + correction, neglected};
  }
  // k > M: phi(0) = phi(1) = 0, and d^(k-M) is folded into the logarithm so
  // the huge factor never multiplies a tiny one.
  const double log_scale = (k - m) * log_d - std::log(total);
  for (double j = std::max(lo, 2.0); j <= hi; j += 1.0) {
    if (at(j) > 0.0) correction += std::exp(std::log(at(j)) + log_scale) * phi(j);
  }
  return {m + correction, neglected};
}

Envelope flora_envelope(int d, int m, int k) {
  const double base = static_cast<double>(d);
  if (k <= m) return {k - 2.0 * std::pow(base, 0.5 * (k - m)), static_cast<double>(k)};
  return {m - std::pow(base, m - k), static_cast<double>(m)};
}

RealizedProfile realized_profile(const ConstructionSpec& spec, const std::vector<Family>& families,
                                 const Caps& caps, int samples_per_size) {
  const SystemLaw law = sample_sparse_system(spec, caps);
  RealizedProfile out;
  out.support_size = law.support_size();
  out.normalized_entropy = entropy(law) / (spec.n * std::log(static_cast<double>(spec.d)));
  if (spec.n <= caps.max_exhaustive_n) {
    out.profile = entropy_profile_exact(law, caps);
  } else {
    std::vector<int> sizes(static_cast<std::size_t>(spec.n) + 1);
    std::iota(sizes.begin(), sizes.end(), 0);
    const SampledProfile sampled =
        entropy_profile_sampled(law, sizes, samples_per_size, spec.seed ^ 0x9E3779B97F4A7C15ULL, true);
    out.profile = EntropyProfile{spec.n, sampled.mean};
  }
  for (const Family& family : families) {
    const CoefficientTable table = coefficient_table(family.measure, spec.n);
    out.intricacies.push_back({family.name, g_functional(out.profile, table)});
  }
  return out;
}

}  // namespace intricacy
