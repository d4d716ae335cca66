#include "intricacy/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>

#include "intricacy/information.hpp"

namespace intricacy {

MixingMeasure::MixingMeasure(std::vector<Atom> atoms, double lebesgue_mass)
    : atoms_(std::move(atoms)), lebesgue_mass_(lebesgue_mass) {
  if (!(lebesgue_mass_ >= 0.0 && lebesgue_mass_ <= 1.0)) {
    throw ValidationError("lebesgue mass must lie in [0,1]");
  }
  double total = lebesgue_mass_;
  for (const Atom& a : atoms_) {
    if (!(a.location >= 0.0 && a.location <= 1.0)) throw ValidationError("atom location outside [0,1]");
    if (!(a.mass > 0.0)) throw ValidationError("atom mass must be positive");
    total += a.mass;
  }
  if (std::abs(total - 1.0) > kCoefficientTolerance) {
    throw ValidationError("mixing measure mass differs from 1");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (const Atom& a : atoms_) {
    const bool mirrored = std::any_of(atoms_.begin(), atoms_.end(), [&](const Atom& b) {
      return std::abs(b.location - (1.0 - a.location)) <= kCoefficientTolerance &&
             std::abs(b.mass - a.mass) <= kCoefficientTolerance;
    });
    if (!mirrored) throw ValidationError("mixing measure is not symmetric under w -> 1-w");
  }
}

bool MixingMeasure::in_support(double x, double tol) const {
  if (x < -tol || x > 1.0 + tol) return false;
  if (lebesgue_mass_ > 0.0) return true;
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [&](const Atom& a) { return std::abs(a.location - x) <= tol; });
}

std::string MixingMeasure::key() const {
  std::ostringstream out;
  out.precision(17);
  out << "leb=" << lebesgue_mass_;
  for (const Atom& a : atoms_) out << ";" << a.location << ":" << a.mass;
  return out.str();
}

MixingMeasure est_measure() { return MixingMeasure({}, 1.0); }

MixingMeasure uniform_measure() { return MixingMeasure({{0.5, 1.0}}, 0.0); }

MixingMeasure p_symmetric_measure(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p must lie in (0,1)");
  if (p == 0.5) return uniform_measure();
  return MixingMeasure({{p, 0.5}, {1.0 - p, 0.5}}, 0.0);
}

Family parse_family(std::string_view shorthand) {
  if (shorthand == "est") return {"est", est_measure()};
  if (shorthand == "uniform") return {"uniform", uniform_measure()};
  constexpr std::string_view prefix = "p-sym:";
  if (shorthand.starts_with(prefix)) {
    const std::string value(shorthand.substr(prefix.size()));
    char* end = nullptr;
    const double p = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      throw ValidationError("cannot parse p in family '" + std::string(shorthand) + "'");
    }
    return {std::string(shorthand), p_symmetric_measure(p)};
  }
  throw ValidationError("unknown intricacy family '" + std::string(shorthand) +
                        "' (expected est, uniform or p-sym:<p>)");
}

nlohmann::json measure_to_json(const MixingMeasure& measure) {
  auto atoms = nlohmann::json::array();
  for (const Atom& a : measure.atoms()) atoms.push_back({a.location, a.mass});
  return {{"atoms", atoms}, {"lebesgue", measure.lebesgue_mass()}};
}

MixingMeasure measure_from_json(const nlohmann::json& doc) {
  try {
    std::vector<Atom> atoms;
    for (const auto& pair : doc.at("atoms")) {
      atoms.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    }
    return MixingMeasure(std::move(atoms), doc.value("lebesgue", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed mixing measure JSON: ") + e.what());
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 50) {
    std::uint64_t value = 1;
    for (int i = 1; i <= k; ++i) value = value * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return static_cast<double>(value);
  }
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

CoefficientTable coefficient_table(const MixingMeasure& measure, int n) {
  if (n < 1) throw ValidationError("coefficient table needs N >= 1");
  CoefficientTable table{n, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0)};
  // Fill the lower half and mirror it, so c_k = c_{N-k} holds bit for bit.
  for (int k = 0; 2 * k <= n; ++k) {
    double value = 0.0;
    for (const Atom& a : measure.atoms()) {
      value += a.mass * std::pow(a.location, k) * std::pow(1.0 - a.location, n - k);
    }
    // Beta integral: int_0^1 t^k (1-t)^(N-k) dt = k!(N-k)!/(N+1)!.
    if (measure.lebesgue_mass() > 0.0) {
      value += measure.lebesgue_mass() / ((n + 1.0) * binomial(n, k));
    }
    table.c[static_cast<std::size_t>(k)] = value;
    table.c[static_cast<std::size_t>(n - k)] = value;
  }
  return table;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_coefficients(const CoefficientTable& table,
                                       const CoefficientTable* predecessor) {
  ValidationReport report;
  const int n = table.n;
  if (n < 0 || table.c.size() != static_cast<std::size_t>(n) + 1) {
    report.checks.push_back({"shape", false, 0.0});
    return report;
  }

  ValidationCheck nonneg{"nonnegative", true, 0.0};
  ValidationCheck symmetry{"symmetric", true, 0.0};
  ValidationCheck mass{"mass", true, 0.0};
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double c = table.at(k);
    if (!(c >= 0.0)) {
      nonneg.passed = false;
      nonneg.worst_error = std::max(nonneg.worst_error, std::abs(c));
    }
    const double asym = std::abs(c - table.at(n - k));
    if (asym != 0.0) {
      symmetry.passed = false;
      symmetry.worst_error = std::max(symmetry.worst_error, asym);
    }
    total += binomial(n, k) * c;
  }
  mass.worst_error = std::abs(total - 1.0);
  mass.passed = mass.worst_error <= kCoefficientTolerance;
  // Some proper nonempty subset must carry weight; vacuous for N < 2.
  ValidationCheck non_null{"non_null", n < 2, 0.0};
  for (int k = 1; k < n; ++k) non_null.passed = non_null.passed || table.at(k) > 0.0;
  report.checks = {nonneg, symmetry, mass, non_null};

  if (predecessor != nullptr) {
    ValidationCheck pascal{"pascal", true, 0.0};
    if (predecessor->n != n - 1 || predecessor->c.size() != static_cast<std::size_t>(n)) {
      pascal.passed = false;
    } else {
      for (int k = 0; k < n; ++k) {
        const double err = std::abs(predecessor->at(k) - (table.at(k) + table.at(k + 1)));
        pascal.worst_error = std::max(pascal.worst_error, err);
      }
      pascal.passed = pascal.worst_error <= kCoefficientTolerance;
    }
    report.checks.push_back(pascal);
  }
  return report;
}

DnLaw dn_law(const CoefficientTable& table) {
  const ValidationReport report = validate_coefficients(table);
  const bool usable = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const ValidationCheck& c) { return c.passed || c.name == "non_null"; });
  if (!usable) {
    std::string failed;
    for (const auto& c : report.checks) {
      if (!c.passed && c.name != "non_null") failed += (failed.empty() ? "" : ", ") + c.name;
    }
    throw ValidationError("invalid coefficient table (" + failed + ")");
  }
  DnLaw law{table.n, std::vector<double>(table.c.size())};
  for (int k = 0; 2 * k <= table.n; ++k) {
    const double p = binomial(table.n, k) * table.at(k);
    law.p[static_cast<std::size_t>(k)] = p;
    law.p[static_cast<std::size_t>(table.n - k)] = p;
  }
  return law;
}

std::shared_ptr<const CoefficientTable> CoefficientCache::get(const MixingMeasure& measure, int n) {
  const auto key = std::make_pair(measure.key(), n);
  {
    std::shared_lock lock(mutex_);
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  }
  auto table = std::make_shared<const CoefficientTable>(coefficient_table(measure, n));
  std::unique_lock lock(mutex_);
  return tables_.try_emplace(key, std::move(table)).first->second;
}

}  // namespace intricacy
