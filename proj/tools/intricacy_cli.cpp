// intricacy: command-line front end for entropy profiles, intricacy
// functionals, the sparse random construction and the seeded experiments.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 invalid input (law,
// family, parameters), 3 computation cap exceeded.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "intricacy/coefficients.hpp"
#include "intricacy/construction.hpp"
#include "intricacy/experiments.hpp"
#include "intricacy/information.hpp"
#include "intricacy/intricacy.hpp"
#include "intricacy/law_io.hpp"
#include "intricacy/maximizer.hpp"

namespace {

using namespace intricacy;

constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;

struct GlobalOptions {
  std::string out;
  std::string format = "csv";
  int threads = 1;
  int cap_subsets = Caps{}.max_exhaustive_n;
  std::uint64_t cap_support = Caps{}.max_support;

  Caps caps() const { return {cap_subsets, cap_support}; }
  bool json() const { return format == "json"; }
};

// Sink for the data payload: --out file, or stdout. Human-readable summary
// lines go to stdout when the payload has its own file, stderr otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& data() { return file_ ? *file_ : std::cout; }
  std::ostream& summary() { return file_ ? std::cout : std::cerr; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// "8", "8,12,16", "8..16" or "8..16:4".
template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> values;
  std::stringstream pieces(text);
  std::string piece;
  auto to_number = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v < 0) throw ValidationError("bad " + what + " '" + text + "'");
    return static_cast<T>(v);
  };
  while (std::getline(pieces, piece, ',')) {
    const auto dots = piece.find("..");
    if (dots == std::string::npos) {
      values.push_back(to_number(piece));
      continue;
    }
    std::string last = piece.substr(dots + 2);
    T step = 1;
    if (const auto colon = last.find(':'); colon != std::string::npos) {
      step = to_number(last.substr(colon + 1));
      last = last.substr(0, colon);
    }
    const T lo = to_number(piece.substr(0, dots));
    const T hi = to_number(last);
    if (step == 0 || hi < lo) throw ValidationError("bad " + what + " range '" + piece + "'");
    for (T v = lo; v <= hi; v += step) values.push_back(v);
  }
  if (values.empty()) throw ValidationError(what + " list is empty");
  return values;
}

std::vector<Family> parse_families(const std::vector<std::string>& names) {
  std::vector<Family> families;
  for (const auto& name : names) families.push_back(parse_family(name));
  return families;
}

std::string num(double v) { return format_number(v); }

// Construction flags shared by construct and census.
struct ConstructionFlags {
  int d = 2;
  int n = 0;
  std::optional<int> m;
  std::optional<double> x;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App* cmd, bool required) {
    cmd->add_option("--d", d, "alphabet size")->check(CLI::Range(2, 1 << 16));
    auto* n_opt = cmd->add_option("--N", n, "system size")->check(CLI::Range(1, 4096));
    auto* m_opt = cmd->add_option("--M", m, "support exponent (d^M draws)");
    auto* x_opt = cmd->add_option("--x", x, "target normalized entropy; M = floor(x N)");
    m_opt->excludes(x_opt);
    auto* seed_opt = cmd->add_option("--seed", seed, "construction seed");
    if (required) {
      n_opt->required();
      seed_opt->required();
    }
  }

  ConstructionSpec spec() const {
    if (!seed) throw ValidationError("--seed is required");
    if (!m && !x) throw ValidationError("one of --M or --x is required");
    const int mm = m ? *m : m_from_target(*x, n);
    return {d, n, mm, *seed};
  }
};

int cmd_entropy(const GlobalOptions& g, const std::string& path) {
  const SystemLaw law = read_law_file(path);
  const double h = entropy(law);
  const double x = h / (law.n() * std::log(static_cast<double>(law.d())));
  Output out(g.out);
  if (g.json()) {
    out.data() << nlohmann::json{{"entropy_nats", h}, {"x", x}}.dump() << '\n';
  } else {
    out.data() << "entropy_nats=" << num(h) << ", x=" << num(x) << '\n';
  }
  return 0;
}

int cmd_profile(const GlobalOptions& g, const std::string& path, bool sampled, int samples,
                std::optional<std::uint64_t> seed) {
  const SystemLaw law = read_law_file(path);
  std::vector<double> values;
  std::vector<double> errors;
  if (sampled) {
    if (!seed) throw ValidationError("--seed is required with --sampled");
    std::vector<int> sizes(static_cast<std::size_t>(law.n()) + 1);
    std::iota(sizes.begin(), sizes.end(), 0);
    const SampledProfile p = entropy_profile_sampled(law, sizes, samples, *seed, true);
    values = p.mean;
    errors = p.standard_error;
  } else {
    values = entropy_profile_exact(law, g.caps()).values;
    errors.assign(values.size(), 0.0);
  }
  Output out(g.out);
  if (g.json()) {
    out.data() << nlohmann::json{{"d", law.d()}, {"N", law.n()}, {"h", values}, {"standard_error", errors}}.dump()
               << '\n';
  } else {
    out.data() << "k,h,standard_error\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
      out.data() << k << ',' << num(values[k]) << ',' << num(errors[k]) << '\n';
    }
  }
  return 0;
}

int cmd_intricacy(const GlobalOptions& g, const std::string& path, const std::vector<std::string>& names,
                  bool sampled, int samples, std::optional<std::uint64_t> seed) {
  const std::vector<Family> families = parse_families(names);
  const SystemLaw law = read_law_file(path);
  std::optional<EntropyProfile> estimate;
  if (sampled) {
    if (!seed) throw ValidationError("--seed is required with --sampled");
    std::vector<int> sizes(static_cast<std::size_t>(law.n()) + 1);
    std::iota(sizes.begin(), sizes.end(), 0);
    estimate = EntropyProfile{law.n(), entropy_profile_sampled(law, sizes, samples, *seed, true).mean};
  } else if (law.n() > g.cap_subsets) {
    throw SizeError("N = " + std::to_string(law.n()) + " exceeds --cap-subsets " +
                    std::to_string(g.cap_subsets) + "; rerun with --sampled --seed <s>");
  }
  std::vector<double> table_cache;
  if (!estimate) table_cache = subset_entropy_table(law, g.caps());

  Output out(g.out);
  auto rows = nlohmann::json::array();
  if (!g.json()) out.data() << "family,d,N,x,icn_x,deficit,normalized_intricacy\n";
  for (const Family& family : families) {
    const CoefficientTable table = coefficient_table(family.measure, law.n());
    DeficitReport report;
    if (estimate) {
      report = deficit_from_profile(*estimate, table);
    } else {
      report = deficit_from_profile(profile_from_table(table_cache, law.n(), law.d()), table);
      report.normalized_intricacy = intricacy_defn(table_cache, law.n(), table) /
                                    (law.n() * std::log(static_cast<double>(law.d())));
    }
    if (g.json()) {
      rows.push_back(deficit_to_json(report, law.d(), law.n(), family.name));
    } else {
      out.data() << family.name << ',' << law.d() << ',' << law.n() << ',' << num(report.x) << ','
                 << num(report.icn_x) << ',' << num(report.deficit) << ','
                 << num(report.normalized_intricacy) << '\n';
    }
  }
  if (g.json()) out.data() << rows.dump() << '\n';
  return 0;
}

int cmd_coeffs(const GlobalOptions& g, const std::string& name, int n) {
  const Family family = parse_family(name);
  const CoefficientTable table = coefficient_table(family.measure, n);
  std::optional<CoefficientTable> previous;
  if (n > 1) previous = coefficient_table(family.measure, n - 1);
  const ValidationReport report = validate_coefficients(table, previous ? &*previous : nullptr);
  const DnLaw dn = dn_law(table);

  Output out(g.out);
  if (g.json()) {
    auto checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
      checks.push_back({{"name", c.name}, {"passed", c.passed}, {"worst_error", c.worst_error}});
    }
    out.data() << nlohmann::json{{"family", family.name},
                                 {"measure", measure_to_json(family.measure)},
                                 {"N", n},
                                 {"c", table.c},
                                 {"p", dn.p},
                                 {"validation", checks}}
                      .dump()
               << '\n';
  } else {
    out.data() << "k,c,p\n";
    for (int k = 0; k <= n; ++k) {
      out.data() << k << ',' << num(table.at(k)) << ',' << num(dn.p[static_cast<std::size_t>(k)]) << '\n';
    }
    for (const auto& c : report.checks) {
      out.summary() << "check " << c.name << ": " << (c.passed ? "pass" : "FAIL")
                    << " (worst error " << num(c.worst_error) << ")\n";
    }
  }
  return report.passed() ? 0 : kExitInvalid;
}

int cmd_construct(const GlobalOptions& g, const ConstructionFlags& flags) {
  const ConstructionSpec spec = flags.spec();
  const SystemLaw law = sample_sparse_system(spec, g.caps());
  const double x = entropy(law) / (spec.n * std::log(static_cast<double>(spec.d)));
  Output out(g.out);
  out.data() << law_to_json(law).dump(1) << '\n';
  out.summary() << "d=" << spec.d << ", N=" << spec.n << ", M=" << spec.m << ", seed=" << spec.seed
                << ", support=" << law.support_size() << ", x_N=" << num(x) << '\n';
  return 0;
}

void write_records(Output& out, const GlobalOptions& g, const std::vector<ExperimentRecord>& records) {
  if (g.json()) {
    auto rows = nlohmann::json::array();
    for (const auto& r : records) {
      rows.push_back({{"family", r.family}, {"d", r.d}, {"N", r.n}, {"M", r.m}, {"seed", r.seed},
                      {"x_N", r.x_n}, {"I_N", r.intricacy}, {"icn_at_xN", r.icn_at_x},
                      {"deficit", r.deficit}, {"sup_profile_gap", r.sup_profile_gap}});
    }
    out.data() << rows.dump() << '\n';
  } else {
    out.data() << kRecordCsvHeader << '\n';
    for (const auto& r : records) write_record_csv_row(out.data(), r);
  }
  out.data().flush();
}

int cmd_sweep(const GlobalOptions& g, const std::vector<std::string>& names, int d, double x,
              const std::string& sizes, const std::string& seeds) {
  SweepConfig config;
  config.families = parse_families(names);
  config.d = d;
  config.x = x;
  config.seeds = parse_list<std::uint64_t>(seeds, "seed");
  config.threads = g.threads;
  config.caps = g.caps();

  Output out(g.out);
  std::vector<ExperimentRecord> records;
  auto sort_records = [&] {
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
      return std::tie(a.family, a.n, a.seed) < std::tie(b.family, b.n, b.seed);
    });
  };
  try {
    for (int n : parse_list<int>(sizes, "N")) {
      config.sizes = {n};
      for (auto& r : convergence_sweep(config)) records.push_back(std::move(r));
    }
  } catch (...) {
    sort_records();
    write_records(out, g, records);
    throw;
  }
  sort_records();
  write_records(out, g, records);
  for (const Family& family : config.families) {
    const auto xs = summarize(records, family.name, &ExperimentRecord::x_n);
    const auto is = summarize(records, family.name, &ExperimentRecord::intricacy);
    const auto gaps = summarize(records, family.name, &ExperimentRecord::sup_profile_gap);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out.summary() << "summary family=" << family.name << " N=" << xs[i].n << " seeds=" << xs[i].count
                    << " mean_x_N=" << num(xs[i].mean) << " mean_I_N=" << num(is[i].mean)
                    << " se_I_N=" << num(is[i].standard_error) << " mean_sup_gap=" << num(gaps[i].mean)
                    << " limit=" << num(ic_limit(x, family.measure)) << '\n';
    }
  }
  return 0;
}

int cmd_census(const GlobalOptions& g, const std::string& law_path, const ConstructionFlags& flags,
               const std::string& family, std::optional<double> target_x, double y, double epsilon,
               int samples, std::optional<std::uint64_t> sample_seed, bool exhaustive) {
  CensusContext context;
  context.family = family;
  std::optional<SystemLaw> law;
  double x = 0.0;
  if (!law_path.empty()) {
    law = read_law_file(law_path);
    context.d = law->d();
    context.n = law->n();
    context.m = 0;
    x = target_x ? *target_x
                 : entropy(*law) / (law->n() * std::log(static_cast<double>(law->d())));
  } else {
    const ConstructionSpec spec = flags.spec();
    law = sample_sparse_system(spec, g.caps());
    context = {family, spec.d, spec.n, spec.m, spec.seed};
    x = target_x ? *target_x : static_cast<double>(spec.m) / spec.n;
  }
  if (!sample_seed && !flags.seed) throw ValidationError("--seed (or --sample-seed) is required");
  const std::uint64_t seed = sample_seed ? *sample_seed : *flags.seed;
  if (!law_path.empty()) context.seed = seed;
  const CensusReport report = threshold_census(*law, x, y, epsilon, samples, seed, exhaustive);

  Output out(g.out);
  if (g.json()) {
    out.data() << nlohmann::json{{"family", context.family}, {"d", context.d}, {"N", context.n},
                                 {"M", context.m}, {"seed", context.seed}, {"y", report.y},
                                 {"k", report.k}, {"epsilon", report.epsilon},
                                 {"samples", report.samples},
                                 {"frac_uniform", report.fraction_near_uniform},
                                 {"se_uniform", report.se_near_uniform},
                                 {"frac_determining", report.fraction_determining},
                                 {"se_determining", report.se_determining}}
                      .dump()
               << '\n';
  } else {
    out.data() << kCensusCsvHeader << '\n';
    write_census_csv_row(out.data(), context, report);
  }
  return 0;
}

int cmd_maximize(const GlobalOptions& g, const std::string& name, int d, int n, int restarts,
                 int iterations, std::uint64_t seed, std::optional<double> target, double penalty,
                 const std::string& law_out) {
  const Family family = parse_family(name);
  MaximizerConfig config;
  config.d = d;
  config.n = n;
  config.table = coefficient_table(family.measure, n);
  config.restarts = restarts;
  config.iterations = iterations;
  config.seed = seed;
  config.target_x = target;
  config.penalty_weight = penalty;
  const MaximizerResult result = maximizer_search(config);

  Output out(g.out);
  if (g.json()) {
    auto rows = nlohmann::json::array();
    for (const auto& r : result.restarts) {
      rows.push_back({{"family", family.name}, {"d", d}, {"N", n}, {"seed", seed}, {"restart", r.restart},
                      {"x", r.x}, {"I", r.intricacy}, {"I_normalized", r.normalized_intricacy},
                      {"icn_x", r.x >= 0 ? ic_n(r.x, config.table) : 0.0}, {"certificate", r.certificate}});
    }
    out.data() << rows.dump() << '\n';
  } else {
    out.data() << "family,d,N,seed,restart,x,I,I_normalized,icn_x,certificate\n";
    for (const auto& r : result.restarts) {
      out.data() << family.name << ',' << d << ',' << n << ',' << seed << ',' << r.restart << ','
                 << num(r.x) << ',' << num(r.intricacy) << ',' << num(r.normalized_intricacy) << ','
                 << num(ic_n(r.x, config.table)) << ',' << num(r.certificate) << '\n';
    }
  }
  if (!law_out.empty()) write_law_file(result.law, law_out);
  out.summary() << "best restart=" << result.best.restart << " I=" << num(result.best.intricacy)
                << " I_normalized=" << num(result.best.normalized_intricacy) << " x=" << num(result.best.x)
                << " certificate=" << num(result.best.certificate) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy profiles, intricacy functionals and approximate maximizers"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--out", g.out, "write the data payload to this file");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "worker threads for sweeps")->check(CLI::Range(1, 1024));
  app.add_option("--cap-subsets", g.cap_subsets, "largest N for exhaustive subset enumeration");
  app.add_option("--cap-support", g.cap_support, "largest support size (dense table or d^M)");

  std::string law_path;
  std::vector<std::string> families{"est"};
  bool sampled = false;
  int samples = 200;
  std::optional<std::uint64_t> seed;

  auto* entropy_cmd = app.add_subcommand("entropy", "entropy of a law file");
  entropy_cmd->add_option("law", law_path, "SystemLaw JSON file")->required();

  auto* profile_cmd = app.add_subcommand("profile", "entropy profile h(k/N)");
  profile_cmd->add_option("law", law_path, "SystemLaw JSON file")->required();
  profile_cmd->add_flag("--sampled", sampled, "Monte Carlo profile over random subsets");
  profile_cmd->add_option("--samples", samples, "subsets per size when sampled")->check(CLI::Range(2, 1 << 30));
  profile_cmd->add_option("--seed", seed, "sampling seed");

  auto* intricacy_cmd = app.add_subcommand("intricacy", "intricacy and deficit per family");
  intricacy_cmd->add_option("law", law_path, "SystemLaw JSON file")->required();
  intricacy_cmd->add_option("--family", families, "est, uniform or p-sym:<p> (repeatable)");
  intricacy_cmd->add_flag("--sampled", sampled, "use a sampled profile past the subset cap");
  intricacy_cmd->add_option("--samples", samples, "subsets per size when sampled")->check(CLI::Range(2, 1 << 30));
  intricacy_cmd->add_option("--seed", seed, "sampling seed");

  std::string family_name = "est";
  int coeff_n = 1;
  auto* coeffs_cmd = app.add_subcommand("coeffs", "coefficient table, D_N law and validation");
  coeffs_cmd->add_option("--family", family_name, "est, uniform or p-sym:<p>");
  coeffs_cmd->add_option("--N", coeff_n, "system size")->required()->check(CLI::Range(1, 1000));

  ConstructionFlags construct_flags;
  auto* construct_cmd = app.add_subcommand("construct", "sample the sparse random construction");
  construct_flags.add_to(construct_cmd, true);

  int sweep_d = 2;
  double sweep_x = 0.5;
  std::string sweep_sizes;
  std::string sweep_seeds;
  auto* sweep_cmd = app.add_subcommand("sweep", "convergence sweep over N and seeds");
  sweep_cmd->add_option("--family", families, "est, uniform or p-sym:<p> (repeatable)");
  sweep_cmd->add_option("--d", sweep_d, "alphabet size")->check(CLI::Range(2, 1 << 16));
  sweep_cmd->add_option("--x", sweep_x, "target normalized entropy")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--N", sweep_sizes, "sizes: 8,12,16 or 8..16:4")->required();
  sweep_cmd->add_option("--seed", sweep_seeds, "seeds: 7, 0..19 or 1,5,9")->required();

  ConstructionFlags census_flags;
  std::string census_family = "est";
  std::optional<double> census_x;
  double census_y = 0.25;
  double census_eps = 0.1;
  int census_samples = 1000;
  std::optional<std::uint64_t> census_sample_seed;
  bool census_exhaustive = false;
  auto* census_cmd = app.add_subcommand("census", "threshold census of subsystems of one size");
  census_cmd->add_option("--law", law_path, "SystemLaw JSON file (instead of construction flags)");
  census_flags.add_to(census_cmd, false);
  census_cmd->add_option("--family", census_family, "family label for the output row");
  census_cmd->add_option("--target-x", census_x, "x in the determining threshold (default M/N or H/(N log d))");
  census_cmd->add_option("--y", census_y, "subset size fraction, k = floor(y N)");
  census_cmd->add_option("--epsilon", census_eps, "tolerance");
  census_cmd->add_option("--samples", census_samples, "sampled subsets")->check(CLI::Range(1, 1 << 30));
  census_cmd->add_option("--sample-seed", census_sample_seed, "subset sampling seed (default --seed)");
  census_cmd->add_flag("--exhaustive", census_exhaustive, "visit every size-k subset (N <= 20)");

  int max_d = 2;
  int max_n = 2;
  int restarts = 10;
  int iterations = 400;
  std::uint64_t max_seed = 0;
  std::optional<double> max_x;
  double penalty = 1.0;
  std::string law_out;
  auto* maximize_cmd = app.add_subcommand("maximize", "small-N search for high-intricacy laws");
  maximize_cmd->add_option("--family", family_name, "est, uniform or p-sym:<p>");
  maximize_cmd->add_option("--d", max_d, "alphabet size");
  maximize_cmd->add_option("--N", max_n, "system size");
  maximize_cmd->add_option("--restarts", restarts, "random restarts")->check(CLI::Range(1, 1 << 20));
  maximize_cmd->add_option("--iterations", iterations, "mirror ascent steps per restart")->check(CLI::Range(0, 1 << 24));
  maximize_cmd->add_option("--seed", max_seed, "search seed")->required();
  maximize_cmd->add_option("--x", max_x, "entropy target (penalized)");
  maximize_cmd->add_option("--penalty", penalty, "initial penalty weight");
  maximize_cmd->add_option("--law-out", law_out, "write the best law as SystemLaw JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*entropy_cmd) return cmd_entropy(g, law_path);
    if (*profile_cmd) return cmd_profile(g, law_path, sampled, samples, seed);
    if (*intricacy_cmd) return cmd_intricacy(g, law_path, families, sampled, samples, seed);
    if (*coeffs_cmd) return cmd_coeffs(g, family_name, coeff_n);
    if (*construct_cmd) return cmd_construct(g, construct_flags);
    if (*sweep_cmd) return cmd_sweep(g, families, sweep_d, sweep_x, sweep_sizes, sweep_seeds);
    if (*census_cmd) {
      return cmd_census(g, law_path, census_flags, census_family, census_x, census_y, census_eps,
                        census_samples, census_sample_seed, census_exhaustive);
    }
    if (*maximize_cmd) {
      return cmd_maximize(g, family_name, max_d, max_n, restarts, iterations, max_seed, max_x, penalty,
                          law_out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
