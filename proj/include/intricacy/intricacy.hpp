#pragma once

// Intricacy evaluation and its comparison with the ideal profile
// h*_x(t) = min(t, x). Raw intricacies are in nats; everything called
// "normalized" is divided by N log d.

#include <span>
#include <string>

#include "intricacy/coefficients.hpp"
#include "intricacy/information.hpp"
#include "json.hpp"

namespace intricacy {

/// sum over all 2^N subsets S of c_{|S|} MI(X_S, X_{S^c}).
double intricacy_defn(const SystemLaw& law, const CoefficientTable& table, const Caps& caps = {});

/// Same sum from a precomputed table of H(X_S) indexed by mask bits.
double intricacy_defn(std::span<const double> subset_entropies, int n,
                      const CoefficientTable& table);

/// N log d (2 sum_k c_k C(N,k) h(k/N) - h(1)).
double intricacy_from_profile(const EntropyProfile& profile, const CoefficientTable& table, int d);

/// 2 E[h(beta_N)] - h(1), the normalized intricacy of a profile.
double g_functional(const EntropyProfile& profile, const CoefficientTable& table);

/// k -> min(k/N, x). Throws std::domain_error for x outside [0,1].
EntropyProfile ideal_profile(double x, int n);

/// Finite-N ceiling 2 E[min(x, beta_N)] - x on normalized intricacy.
double ic_n(double x, const CoefficientTable& table);

/// Limit ceiling 2 E[min(x, W)] - x, in closed form for atoms plus the
/// uniform component.
double ic_limit(double x, const MixingMeasure& measure);

/// E|h(beta_N) - g(beta_N)|.
double profile_norm(const EntropyProfile& h, const EntropyProfile& g, const CoefficientTable& table);

struct DeficitReport {
  double x = 0.0;
  double icn_x = 0.0;
  /// 2 E|h(beta_N) - min(beta_N, x)|, so that
  /// normalized_intricacy = icn_x - deficit.
  double deficit = 0.0;
  double normalized_intricacy = 0.0;
};

/// Intricacy from the definition, deficit from the exact profile. The two
/// routes agree through normalized_intricacy = icn_x - deficit.
DeficitReport deficit_report(const SystemLaw& law, const CoefficientTable& table,
                             const Caps& caps = {});

/// Everything from one profile (used when the law is no longer at hand or
/// the profile is a Monte Carlo estimate).
DeficitReport deficit_from_profile(const EntropyProfile& profile, const CoefficientTable& table);

nlohmann::json deficit_to_json(const DeficitReport& report, int d, int n, const std::string& family);

}  // namespace intricacy
