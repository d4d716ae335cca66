#pragma once

// Intricacy coefficient systems. An exchangeable, weakly additive intricacy
// is fixed by a symmetric probability law on [0,1] (the mixing measure);
// at size N its coefficients are the moments c_k = E[W^k (1-W)^(N-k)].

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "intricacy/information.hpp"

namespace intricacy {

inline constexpr double kCoefficientTolerance = 1e-12;

struct Atom {
  double location = 0.5;
  double mass = 1.0;
};

/// Finite atoms plus a uniform-density component on [0,1].
class MixingMeasure {
 public:
  /// Throws ValidationError unless locations lie in [0,1], masses are
  /// positive, the total is 1 within 1e-12 and the atom set is symmetric
  /// under w -> 1-w with matching masses.
  MixingMeasure(std::vector<Atom> atoms, double lebesgue_mass);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double lebesgue_mass() const { return lebesgue_mass_; }

  /// Whether x lies in the support: an atom location, or anywhere in [0,1]
  /// when the uniform component has positive mass.
  bool in_support(double x, double tol = 1e-12) const;

  /// Canonical text used as cache key.
  std::string key() const;

 private:
  std::vector<Atom> atoms_;  // sorted by location
  double lebesgue_mass_ = 0.0;
};

MixingMeasure est_measure();
MixingMeasure uniform_measure();
/// Atoms at p and 1-p with mass 1/2 each; p = 1/2 gives the uniform measure.
MixingMeasure p_symmetric_measure(double p);

/// A named intricacy: "est", "uniform" or "p-sym:<p>".
struct Family {
  std::string name;
  MixingMeasure measure;
};

/// Parses a shorthand; throws ValidationError on unknown names or bad p.
Family parse_family(std::string_view shorthand);

nlohmann::json measure_to_json(const MixingMeasure& measure);
MixingMeasure measure_from_json(const nlohmann::json& doc);

/// Values c^N_k for k = 0..N.
struct CoefficientTable {
  int n = 0;
  std::vector<double> c;

  double at(int k) const { return c.at(static_cast<std::size_t>(k)); }
};

/// Exact for N <= 50, through lgamma above.
double binomial(int n, int k);

CoefficientTable coefficient_table(const MixingMeasure& measure, int n);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double worst_error = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  const ValidationCheck* find(std::string_view name) const;
};

/// Checks nonnegativity, symmetry (exact), mass (sum C(N,k) c_k = 1),
/// non-nullness (some 0 < k < N has c_k > 0) and, when a size-(N-1)
/// predecessor is supplied, Pascal consistency c^{N-1}_k = c^N_k + c^N_{k+1}.
/// Never throws.
ValidationReport validate_coefficients(const CoefficientTable& table,
                                       const CoefficientTable* predecessor = nullptr);

/// Law of the coefficient-induced subset size D_N: P(D_N = k) = C(N,k) c_k.
struct DnLaw {
  int n = 0;
  std::vector<double> p;

  /// E[f(D_N / N)].
  template <typename F>
  double expect_fraction(F&& f) const {
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) sum += p[static_cast<std::size_t>(k)] * f(static_cast<double>(k) / n);
    return sum;
  }
};

/// Throws ValidationError when the table fails any check other than non_null.
DnLaw dn_law(const CoefficientTable& table);

/// Tables memoized per (measure, N); safe for concurrent readers.
class CoefficientCache {
 public:
  std::shared_ptr<const CoefficientTable> get(const MixingMeasure& measure, int n);

 private:
  std::shared_mutex mutex_;
  std::map<std::pair<std::string, int>, std::shared_ptr<const CoefficientTable>> tables_;
};

}  // namespace intricacy
