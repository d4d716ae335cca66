#pragma once

// Seeded experiments over the sparse random construction: convergence
// sweeps, profile convergence, simultaneity across intricacy families and
// the subset-size threshold census.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "intricacy/coefficients.hpp"
#include "intricacy/construction.hpp"
#include "intricacy/information.hpp"

namespace intricacy {

struct ExperimentRecord {
  std::string family;
  int d = 2;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  double x_n = 0.0;          // H(X)/(N log d)
  double intricacy = 0.0;    // I^c(X)/(N log d)
  double icn_at_x = 0.0;     // i^c_N(x_N)
  double deficit = 0.0;      // ||h_X - h*_{x_N}||_{c,N}
  double sup_profile_gap = 0.0;  // max_k |h_X(k/N) - h*_x(k/N)|, x the sweep target
};

struct SweepConfig {
  std::vector<Family> families;
  int d = 2;
  double x = 0.5;
  std::vector<int> sizes;
  std::vector<std::uint64_t> seeds;
  int threads = 1;
  Caps caps;
};

/// One record per (family, N, seed) with M = floor(x N); the law for a given
/// (N, seed) is shared by every family. Sorted by (family, N, seed).
std::vector<ExperimentRecord> convergence_sweep(const SweepConfig& config);

/// Mean and binomial/sample standard error of a metric at one N.
struct TrendPoint {
  int n = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double standard_error = 0.0;
};

using RecordMetric = double ExperimentRecord::*;

/// Per-N seed means of a record field for one family, ascending in N.
std::vector<TrendPoint> summarize(const std::vector<ExperimentRecord>& records,
                                  const std::string& family, RecordMetric metric);

/// Means strictly increase (decrease) along the trend, each step clearing
/// margin_se combined standard errors.
bool increasing(const std::vector<TrendPoint>& trend, double margin_se = 0.0);
bool decreasing(const std::vector<TrendPoint>& trend, double margin_se = 0.0);

struct SizedLaw {
  int n = 0;
  std::uint64_t seed = 0;
  SystemLaw law;
};

struct ProfileConvergence {
  double x = 0.0;
  std::vector<TrendPoint> gaps;  // seed means of sup_k |h_X - h*_x|
  bool decreasing = false;
};

/// Sup-gap table of exact profiles against h*_x, grouped by N.
ProfileConvergence profile_convergence(const std::vector<SizedLaw>& laws, double x,
                                       double margin_se = 0.0, const Caps& caps = {});

/// max_k |h(k/N) - min(k/N, x)|.
double sup_profile_gap(const EntropyProfile& profile, double x);

struct CensusReport {
  double y = 0.0;
  int k = 0;
  double epsilon = 0.0;
  int samples = 0;
  double fraction_near_uniform = 0.0;
  double se_near_uniform = 0.0;
  double fraction_determining = 0.0;
  double se_determining = 0.0;
};

/// Draws `samples` uniform size-k subsets (k = floor(y N)) with replacement
/// and counts those with H(X_S) > (1-eps) k log d, and those with
/// H(X | X_S) < eps x N log d. With exhaustive set (N <= 20), every size-k
/// subset is visited once instead and `samples` is replaced by C(N,k).
CensusReport threshold_census(const SystemLaw& law, double x, double y, double epsilon, int samples,
                              std::uint64_t seed, bool exhaustive = false);

struct FamilyTrend {
  std::string family;
  double target = 0.0;  // i^c(x)
  bool x_in_support = true;
  std::vector<TrendPoint> intricacy;
  std::vector<double> gap_to_target;  // |mean I_N - i^c(x)| per N
  bool gap_decreasing = false;
};

struct SimultaneityReport {
  std::vector<FamilyTrend> families;
  std::vector<std::string> warnings;
  std::vector<ExperimentRecord> records;
};

/// Runs one sweep with all families on shared laws and compares each
/// family's trend with its own limit i^c(x). A target x outside some
/// family's support produces a warning, not an error.
SimultaneityReport simultaneity_check(const SweepConfig& config);

inline constexpr const char* kRecordCsvHeader =
    "family,d,N,M,seed,x_N,I_N,icn_at_xN,deficit,sup_profile_gap";
inline constexpr const char* kCensusCsvHeader =
    "family,d,N,M,seed,y,k,epsilon,samples,frac_uniform,se_uniform,frac_determining,se_determining";

/// Doubles as %.17g.
std::string format_number(double value);

void write_record_csv_row(std::ostream& out, const ExperimentRecord& record);

struct CensusContext {
  std::string family;
  int d = 2;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
};

void write_census_csv_row(std::ostream& out, const CensusContext& context, const CensusReport& report);

}  // namespace intricacy
