#include "intricacy/intricacy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intricacy {

namespace {

void check_x(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("normalized entropy x must lie in [0,1]");
}

void check_sizes(int profile_n, int table_n) {
  if (profile_n != table_n) {
    throw std::invalid_argument("size mismatch: profile has N = " + std::to_string(profile_n) +
                                ", coefficient table has N = " + std::to_string(table_n));
  }
}

// sum_k c_k C(N,k) f(k/N) = E[f(beta_N)].
template <typename F>
double expect_beta(const CoefficientTable& table, F&& f) {
  double sum = 0.0;
  for (int k = 0; k <= table.n; ++k) {
    sum += table.at(k) * binomial(table.n, k) * f(k);
  }
  return sum;
}

}  // namespace

double intricacy_defn(std::span<const double> subset_entropies, int n,
                      const CoefficientTable& table) {
  check_sizes(n, table.n);
  const std::uint64_t full = SubsetMask::full(n).bits();
  const double h_total = subset_entropies[full];
  double sum = 0.0;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const double mi = subset_entropies[mask] + subset_entropies[full & ~mask] - h_total;
    sum += table.at(std::popcount(mask)) * mi;
  }
  return sum;
}

double intricacy_defn(const SystemLaw& law, const CoefficientTable& table, const Caps& caps) {
  check_sizes(law.n(), table.n);
  return intricacy_defn(subset_entropy_table(law, caps), law.n(), table);
}

double g_functional(const EntropyProfile& profile, const CoefficientTable& table) {
  check_sizes(profile.n, table.n);
  return 2.0 * expect_beta(table, [&](int k) { return profile.at(k); }) - profile.total();
}

double intricacy_from_profile(const EntropyProfile& profile, const CoefficientTable& table, int d) {
  return profile.n * std::log(static_cast<double>(d)) * g_functional(profile, table);
}

EntropyProfile ideal_profile(double x, int n) {
  check_x(x);
  EntropyProfile profile{n, std::vector<double>(static_cast<std::size_t>(n) + 1)};
  for (int k = 0; k <= n; ++k) {
    profile.values[static_cast<std::size_t>(k)] = std::min(static_cast<double>(k) / n, x);
  }
  return profile;
}

double ic_n(double x, const CoefficientTable& table) {
  check_x(x);
  const int n = table.n;
  return 2.0 * expect_beta(table, [&](int k) { return std::min(x, static_cast<double>(k) / n); }) - x;
}

double ic_limit(double x, const MixingMeasure& measure) {
  check_x(x);
  double expectation = 0.0;
  for (const Atom& a : measure.atoms()) expectation += a.mass * std::min(x, a.location);
  // int_0^1 min(x, t) dt = x - x^2/2.
  expectation += measure.lebesgue_mass() * (x - 0.5 * x * x);
  return 2.0 * expectation - x;
}

double profile_norm(const EntropyProfile& h, const EntropyProfile& g, const CoefficientTable& table) {
  check_sizes(h.n, g.n);
  check_sizes(h.n, table.n);
  return expect_beta(table, [&](int k) { return std::abs(h.at(k) - g.at(k)); });
}

DeficitReport deficit_from_profile(const EntropyProfile& profile, const CoefficientTable& table) {
  DeficitReport report;
  report.x = std::clamp(profile.total(), 0.0, 1.0);
  report.icn_x = ic_n(report.x, table);
  // The gap i^c_N(x) - G(h) is twice the expected distance to the ideal profile.
  report.deficit = 2.0 * profile_norm(profile, ideal_profile(report.x, profile.n), table);
  report.normalized_intricacy = g_functional(profile, table);
  return report;
}

DeficitReport deficit_report(const SystemLaw& law, const CoefficientTable& table, const Caps& caps) {
  check_sizes(law.n(), table.n);
  const std::vector<double> entropies = subset_entropy_table(law, caps);
  const EntropyProfile profile = profile_from_table(entropies, law.n(), law.d());
  DeficitReport report = deficit_from_profile(profile, table);
  report.normalized_intricacy =
      intricacy_defn(entropies, law.n(), table) / (law.n() * std::log(static_cast<double>(law.d())));
  return report;
}

nlohmann::json deficit_to_json(const DeficitReport& report, int d, int n, const std::string& family) {
  return {{"family", family},
          {"d", d},
          {"N", n},
          {"x", report.x},
          {"icn_x", report.icn_x},
          {"deficit", report.deficit},
          {"normalized_intricacy", report.normalized_intricacy}};
}

}  // namespace intricacy
