#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "intricacy/experiments.hpp"
#include "intricacy/intricacy.hpp"
#include "test_support.hpp"

using namespace intricacy;
using namespace testing_support;

namespace {

SweepConfig small_sweep(std::vector<std::string> names, double x, std::vector<int> sizes, int seeds) {
  SweepConfig config;
  for (const auto& name : names) config.families.push_back(parse_family(name));
  config.x = x;
  config.sizes = std::move(sizes);
  for (int s = 0; s < seeds; ++s) config.seeds.push_back(static_cast<std::uint64_t>(s));
  return config;
}

TEST(Sweep, RecordInvariants) {
  const auto records = convergence_sweep(small_sweep({"est", "uniform", "p-sym:0.3"}, 0.5, {6, 9, 12}, 8));
  ASSERT_EQ(records.size(), 3u * 3u * 8u);
  for (const auto& r : records) {
    EXPECT_NEAR(r.intricacy, r.icn_at_x - r.deficit, 1e-9);
    EXPECT_LE(r.intricacy, r.icn_at_x + 1e-9);
    const Family f = parse_family(r.family);
    EXPECT_LE(std::abs(r.icn_at_x - ic_limit(r.x_n, f.measure)), 1.0 / (2.0 * std::sqrt(r.n)));
    EXPECT_EQ(r.m, m_from_target(0.5, r.n));
  }
}

TEST(Sweep, SortedAndIndependentOfThreads) {
  SweepConfig config = small_sweep({"uniform", "est"}, 0.5, {10, 6}, 5);
  const auto serial = convergence_sweep(config);
  config.threads = 4;
  const auto parallel = convergence_sweep(config);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].family, parallel[i].family);
    EXPECT_EQ(serial[i].n, parallel[i].n);
    EXPECT_EQ(serial[i].seed, parallel[i].seed);
    EXPECT_EQ(serial[i].intricacy, parallel[i].intricacy);
    if (i > 0) {
      const auto& a = serial[i - 1];
      const auto& b = serial[i];
      EXPECT_TRUE(std::tie(a.family, a.n, a.seed) < std::tie(b.family, b.n, b.seed));
    }
  }
  EXPECT_EQ(serial.front().family, "est");
}

TEST(Sweep, ZeroTargetGivesZeroIntricacy) {
  for (const auto& r : convergence_sweep(small_sweep({"est", "uniform"}, 0.0, {5, 8}, 4))) {
    EXPECT_EQ(r.intricacy, 0.0);
    EXPECT_EQ(r.x_n, 0.0);
  }
}

TEST(Sweep, TrendsTowardLimits) {
  const auto records = convergence_sweep(small_sweep({"est"}, 0.5, {8, 12, 16}, 30));
  const auto x = summarize(records, "est", &ExperimentRecord::x_n);
  const auto i = summarize(records, "est", &ExperimentRecord::intricacy);
  ASSERT_EQ(i.size(), 3u);
  EXPECT_TRUE(increasing(x, -1.0));
  EXPECT_TRUE(increasing(i, -1.0));
  for (const auto& point : i) EXPECT_LT(point.mean, 0.25);
  for (const auto& point : x) EXPECT_LE(point.mean, 0.5 + 1e-12);
}

// Seed mean of M/N - x_N lies in [0, 3 d^(M-N)/N].
TEST(Sweep, EntropyDeficitInExpectation) {
  for (int n : {8, 10, 12}) {
    const auto records = convergence_sweep(small_sweep({"est"}, 0.5, {n}, 100));
    const int m = m_from_target(0.5, n);
    double mean = 0.0;
    for (const auto& r : records) mean += static_cast<double>(m) / n - r.x_n;
    mean /= static_cast<double>(records.size());
    EXPECT_GE(mean, 0.0);
    EXPECT_LE(mean, 3.0 * std::pow(2.0, m - n) / n) << n;
  }
}

TEST(Summaries, MeansAndStandardErrors) {
  std::vector<ExperimentRecord> records(4);
  const double values[] = {1.0, 3.0, 10.0, 10.0};
  const int sizes[] = {4, 4, 8, 8};
  for (std::size_t i = 0; i < 4; ++i) {
    records[i].family = "est";
    records[i].n = sizes[i];
    records[i].intricacy = values[i];
  }
  const auto trend = summarize(records, "est", &ExperimentRecord::intricacy);
  ASSERT_EQ(trend.size(), 2u);
  EXPECT_EQ(trend[0].mean, 2.0);
  EXPECT_NEAR(trend[0].standard_error, 1.0, 1e-15);
  EXPECT_EQ(trend[1].standard_error, 0.0);
  EXPECT_TRUE(increasing(trend, 3.0));
  EXPECT_FALSE(increasing(trend, 9.0));
  EXPECT_FALSE(decreasing(trend));
  EXPECT_TRUE(summarize(records, "uniform", &ExperimentRecord::intricacy).empty());
}

TEST(ProfileConvergence, DegenerateLaws) {
  std::vector<SizedLaw> products;
  std::vector<SizedLaw> constants;
  for (int n : {3, 5, 7}) {
    products.push_back({n, 0, uniform_law(2, n)});
    constants.push_back({n, 0, constant_law(2, n)});
  }
  for (const auto& g : profile_convergence(products, 1.0).gaps) EXPECT_NEAR(g.mean, 0.0, 1e-12);
  for (const auto& g : profile_convergence(constants, 0.0).gaps) EXPECT_EQ(g.mean, 0.0);
  EXPECT_EQ(sup_profile_gap({2, {0.0, 0.5, 0.5}}, 0.5), 0.0);
  EXPECT_NEAR(sup_profile_gap({2, {0.0, 0.25, 0.5}}, 0.5), 0.25, 1e-15);
}

TEST(ProfileConvergence, GapShrinksWithSize) {
  std::vector<SizedLaw> laws;
  for (int n : {8, 16}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      laws.push_back({n, seed, sample_sparse_system({2, n, n / 2, seed})});
    }
  }
  const ProfileConvergence result = profile_convergence(laws, 0.5, 3.0);
  ASSERT_EQ(result.gaps.size(), 2u);
  EXPECT_TRUE(result.decreasing);
}

TEST(Census, ProductLawIsUniformEverywhere) {
  for (double y : {0.2, 0.5, 0.8}) {
    const CensusReport r = threshold_census(uniform_law(2, 10), 1.0, y, 0.05, 200, 3);
    EXPECT_EQ(r.fraction_near_uniform, 1.0);
    EXPECT_EQ(r.se_near_uniform, 0.0);
  }
}

TEST(Census, DiagonalLawIsDeterminedByAnyCoordinate) {
  const SystemLaw law = diagonal_law(2, 8);
  const double x = entropy(law) / (8 * std::log(2.0));
  for (double y : {0.125, 0.5, 0.9}) {
    EXPECT_EQ(threshold_census(law, x, y, 0.01, 100, 1).fraction_determining, 1.0);
  }
}

TEST(Census, TighterEpsilonNeverRaisesFractions) {
  const SystemLaw law = sample_sparse_system({2, 12, 6, 9});
  for (double y : {0.25, 0.5, 0.75}) {
    double last_uniform = 2.0;
    double last_determining = 2.0;
    // Decreasing epsilon is increasing strictness; same subsets via the seed.
    for (double eps : {0.5, 0.3, 0.2, 0.1, 0.05, 0.01}) {
      const CensusReport r = threshold_census(law, 0.5, y, eps, 300, 4);
      EXPECT_LE(r.fraction_near_uniform, last_uniform);
      EXPECT_LE(r.fraction_determining, last_determining);
      last_uniform = r.fraction_near_uniform;
      last_determining = r.fraction_determining;
    }
  }
}

TEST(Census, ExhaustiveVisitsEverySubset) {
  const SystemLaw law = sample_sparse_system({2, 10, 5, 2});
  const CensusReport r = threshold_census(law, 0.5, 0.3, 0.1, 1, 0, true);
  EXPECT_EQ(r.k, 3);
  EXPECT_EQ(r.samples, 120);
  EXPECT_EQ(r.se_near_uniform, 0.0);
  EXPECT_THROW(threshold_census(constant_law(2, 21), 0.0, 0.5, 0.1, 1, 0, true), SizeError);
}

TEST(Census, ValidatesArguments) {
  const SystemLaw law = uniform_law(2, 4);
  EXPECT_THROW(threshold_census(law, 1.0, 0.0, 0.1, 10, 0), std::domain_error);
  EXPECT_THROW(threshold_census(law, 1.0, 0.5, 1.0, 10, 0), std::domain_error);
  EXPECT_THROW(threshold_census(law, 1.0, 0.1, 0.1, 10, 0), std::domain_error);
  EXPECT_THROW(threshold_census(law, 1.0, 0.5, 0.1, 0, 0), std::invalid_argument);
}

TEST(Census, BinomialStandardError) {
  const SystemLaw law = sample_sparse_system({2, 14, 7, 1});
  const CensusReport r = threshold_census(law, 0.5, 0.5, 0.1, 400, 8);
  EXPECT_NEAR(r.se_near_uniform, std::sqrt(r.fraction_near_uniform * (1 - r.fraction_near_uniform) / 400), 1e-15);
  const CensusReport again = threshold_census(law, 0.5, 0.5, 0.1, 400, 8);
  EXPECT_EQ(r.fraction_near_uniform, again.fraction_near_uniform);
  EXPECT_EQ(r.fraction_determining, again.fraction_determining);
}

TEST(Simultaneity, WarnsOutsideSupport) {
  const SimultaneityReport report = simultaneity_check(small_sweep({"p-sym:0.4", "est"}, 0.3, {6}, 2));
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("p-sym:0.4"), std::string::npos);
  EXPECT_FALSE(report.families[0].x_in_support);
  EXPECT_TRUE(report.families[1].x_in_support);
}

TEST(Simultaneity, SingleFamilyIsASweep) {
  const SweepConfig config = small_sweep({"uniform"}, 0.5, {6, 8}, 3);
  const SimultaneityReport report = simultaneity_check(config);
  const auto records = convergence_sweep(config);
  ASSERT_EQ(report.records.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(report.records[i].intricacy, records[i].intricacy);
  EXPECT_EQ(report.families[0].target, 0.5);
}

TEST(Simultaneity, FamiliesApproachTheirOwnLimits) {
  const SimultaneityReport report = simultaneity_check(small_sweep({"est", "uniform", "p-sym:0.3"}, 0.5, {8, 12, 16}, 20));
  const double targets[] = {0.25, 0.5, 0.3};
  ASSERT_EQ(report.families.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(report.families[i].target, targets[i], 1e-15);
    EXPECT_TRUE(report.families[i].gap_decreasing) << report.families[i].family;
  }
  // x = 0.5 lies outside the support {0.3, 0.7} of the p-symmetric measure.
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("p-sym:0.3"), std::string::npos);
}

TEST(Csv, HeadersAndRows) {
  EXPECT_STREQ(kRecordCsvHeader, "family,d,N,M,seed,x_N,I_N,icn_at_xN,deficit,sup_profile_gap");
  EXPECT_STREQ(kCensusCsvHeader,
               "family,d,N,M,seed,y,k,epsilon,samples,frac_uniform,se_uniform,frac_determining,se_determining");
  std::ostringstream out;
  write_record_csv_row(out, {"est", 2, 8, 4, 7, 0.5, 0.1, 0.2, 0.1, 0.25});
  EXPECT_EQ(out.str(), "est,2,8,4,7,0.5,0.10000000000000001,0.20000000000000001,0.10000000000000001,0.25\n");
  std::ostringstream census;
  write_census_csv_row(census, {"est", 2, 14, 7, 3}, {0.25, 3, 0.1, 1000, 0.9, 0.01, 0.0, 0.0});
  EXPECT_EQ(census.str(), "est,2,14,7,3,0.25,3,0.10000000000000001,1000,0.90000000000000002,0.01,0,0\n");
  EXPECT_EQ(std::stod(format_number(0.1)), 0.1);
}

}  // namespace
