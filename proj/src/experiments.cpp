#include "intricacy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <tuple>

#include "intricacy/intricacy.hpp"
#include "intricacy/rng.hpp"

namespace intricacy {

namespace {

EntropyProfile profile_of(const SystemLaw& law, const Caps& caps, std::uint64_t seed) {
  if (law.n() <= caps.max_exhaustive_n) return entropy_profile_exact(law, caps);
  std::vector<int> sizes(static_cast<std::size_t>(law.n()) + 1);
  std::iota(sizes.begin(), sizes.end(), 0);
  return EntropyProfile{law.n(), entropy_profile_sampled(law, sizes, 200, seed, true).mean};
}

// Runs job(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any job is rethrown after all workers stop.
template <typename Job>
void run_parallel(std::size_t count, int threads, Job&& job) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int floor_fraction(double y, int n) { return static_cast<int>(std::floor(y * n + 1e-9)); }

}  // namespace

double sup_profile_gap(const EntropyProfile& profile, double x) {
  const EntropyProfile ideal = ideal_profile(x, profile.n);
  double gap = 0.0;
  for (int k = 0; k <= profile.n; ++k) gap = std::max(gap, std::abs(profile.at(k) - ideal.at(k)));
  return gap;
}

std::vector<ExperimentRecord> convergence_sweep(const SweepConfig& config) {
  if (!(config.x >= 0.0 && config.x <= 1.0)) throw std::domain_error("sweep target x must lie in [0,1]");
  if (config.families.empty()) throw std::invalid_argument("sweep needs at least one family");

  struct Cell {
    int n;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int n : config.sizes) {
    for (std::uint64_t seed : config.seeds) cells.push_back({n, seed});
  }

  CoefficientCache cache;
  std::vector<std::vector<ExperimentRecord>> per_cell(cells.size());
  run_parallel(cells.size(), config.threads, [&](std::size_t i) {
    const auto [n, seed] = cells[i];
    const ConstructionSpec spec{config.d, n, m_from_target(config.x, n), seed};
    const SystemLaw law = sample_sparse_system(spec, config.caps);
    const EntropyProfile profile = profile_of(law, config.caps, seed ^ 0x9E3779B97F4A7C15ULL);
    const double gap = sup_profile_gap(profile, config.x);
    for (const Family& family : config.families) {
      const DeficitReport report = deficit_from_profile(profile, *cache.get(family.measure, n));
      per_cell[i].push_back({family.name, spec.d, spec.n, spec.m, seed, report.x,
                             report.normalized_intricacy, report.icn_x, report.deficit, gap});
    }
  });

  std::vector<ExperimentRecord> records;
  for (auto& cell : per_cell) {
    for (auto& r : cell) records.push_back(std::move(r));
  }
  std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.family, a.n, a.seed) < std::tie(b.family, b.n, b.seed);
  });
  return records;
}

std::vector<TrendPoint> summarize(const std::vector<ExperimentRecord>& records,
                                  const std::string& family, RecordMetric metric) {
  std::map<int, std::vector<double>> by_n;
  for (const auto& r : records) {
    if (r.family == family) by_n[r.n].push_back(r.*metric);
  }
  std::vector<TrendPoint> trend;
  for (const auto& [n, values] : by_n) {
    TrendPoint point{n, values.size(), 0.0, 0.0};
    point.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - point.mean) * (v - point.mean);
      point.standard_error = std::sqrt(ss / static_cast<double>(values.size() - 1) /
                                       static_cast<double>(values.size()));
    }
    trend.push_back(point);
  }
  return trend;
}

bool increasing(const std::vector<TrendPoint>& trend, double margin_se) {
  for (std::size_t i = 0; i + 1 < trend.size(); ++i) {
    const double se = std::hypot(trend[i].standard_error, trend[i + 1].standard_error);
    if (!(trend[i + 1].mean - trend[i].mean > margin_se * se)) return false;
  }
  return true;
}

bool decreasing(const std::vector<TrendPoint>& trend, double margin_se) {
  for (std::size_t i = 0; i + 1 < trend.size(); ++i) {
    const double se = std::hypot(trend[i].standard_error, trend[i + 1].standard_error);
    if (!(trend[i].mean - trend[i + 1].mean > margin_se * se)) return false;
  }
  return true;
}

ProfileConvergence profile_convergence(const std::vector<SizedLaw>& laws, double x,
                                       double margin_se, const Caps& caps) {
  std::vector<ExperimentRecord> gaps;
  int d = -1;
  for (const auto& entry : laws) {
    if (d >= 0 && entry.law.d() != d) throw std::invalid_argument("laws must share the alphabet size");
    d = entry.law.d();
    ExperimentRecord r;
    r.n = entry.n;
    r.seed = entry.seed;
    r.sup_profile_gap = sup_profile_gap(profile_of(entry.law, caps, entry.seed), x);
    gaps.push_back(r);
  }
  ProfileConvergence out;
  out.x = x;
  out.gaps = summarize(gaps, "", &ExperimentRecord::sup_profile_gap);
  out.decreasing = decreasing(out.gaps, margin_se);
  return out;
}

CensusReport threshold_census(const SystemLaw& law, double x, double y, double epsilon, int samples,
                              std::uint64_t seed, bool exhaustive) {
  if (!(y > 0.0 && y < 1.0)) throw std::domain_error("census size fraction y must lie in (0,1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("census epsilon must lie in (0,1)");
  if (samples < 1) throw std::invalid_argument("census needs at least one sample");
  const int n = law.n();
  const int k = floor_fraction(y, n);
  if (k < 1) throw std::domain_error("floor(y N) must be at least 1");

  const double log_d = std::log(static_cast<double>(law.d()));
  const double total = entropy(law);
  const double uniform_floor = (1.0 - epsilon) * k * log_d;
  const double determining_ceiling = epsilon * x * n * log_d;

  CensusReport report{y, k, epsilon, samples, 0.0, 0.0, 0.0, 0.0};
  long near_uniform = 0;
  long determining = 0;
  auto tally = [&](SubsetMask subset) {
    const double h = subset_entropy(law, subset);
    if (h > uniform_floor) ++near_uniform;
    if (total - h < determining_ceiling) ++determining;
  };

  if (exhaustive) {
    if (n > 20) throw SizeError("exhaustive census is limited to N <= 20");
    int visited = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (std::popcount(mask) != k) continue;
      tally(SubsetMask(mask));
      ++visited;
    }
    report.samples = visited;
  } else {
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) tally(SubsetMask::of(rng.sample_indices(n, k)));
  }

  const double count = report.samples;
  report.fraction_near_uniform = near_uniform / count;
  report.fraction_determining = determining / count;
  if (!exhaustive) {
    auto se = [&](double f) { return std::sqrt(f * (1.0 - f) / count); };
    report.se_near_uniform = se(report.fraction_near_uniform);
    report.se_determining = se(report.fraction_determining);
  }
  return report;
}

SimultaneityReport simultaneity_check(const SweepConfig& config) {
  SimultaneityReport report;
  report.records = convergence_sweep(config);
  for (const Family& family : config.families) {
    FamilyTrend trend;
    trend.family = family.name;
    trend.target = ic_limit(config.x, family.measure);
    trend.x_in_support = family.measure.in_support(config.x);
    if (!trend.x_in_support) {
      report.warnings.push_back("x = " + format_number(config.x) + " is outside the support of " +
                                family.name + "; convergence to i^c(x) is not guaranteed");
    }
    trend.intricacy = summarize(report.records, family.name, &ExperimentRecord::intricacy);
    for (const auto& point : trend.intricacy) trend.gap_to_target.push_back(std::abs(point.mean - trend.target));
    trend.gap_decreasing = true;
    for (std::size_t i = 0; i + 1 < trend.gap_to_target.size(); ++i) {
      if (!(trend.gap_to_target[i + 1] < trend.gap_to_target[i])) trend.gap_decreasing = false;
    }
    report.families.push_back(std::move(trend));
  }
  return report;
}

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_record_csv_row(std::ostream& out, const ExperimentRecord& r) {
  out << r.family << ',' << r.d << ',' << r.n << ',' << r.m << ',' << r.seed << ','
      << format_number(r.x_n) << ',' << format_number(r.intricacy) << ','
      << format_number(r.icn_at_x) << ',' << format_number(r.deficit) << ','
      << format_number(r.sup_profile_gap) << '\n';
}

void write_census_csv_row(std::ostream& out, const CensusContext& c, const CensusReport& r) {
  out << c.family << ',' << c.d << ',' << c.n << ',' << c.m << ',' << c.seed << ','
      << format_number(r.y) << ',' << r.k << ',' << format_number(r.epsilon) << ',' << r.samples
      << ',' << format_number(r.fraction_near_uniform) << ',' << format_number(r.se_near_uniform)
      << ',' << format_number(r.fraction_determining) << ',' << format_number(r.se_determining)
      << '\n';
}

}  // namespace intricacy
