#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "intricacy/information.hpp"
#include "test_support.hpp"

using namespace intricacy;
using namespace testing_support;

namespace {

const double kLog2 = std::log(2.0);

TEST(Entropy, PointMassIsZero) { EXPECT_EQ(entropy(constant_law(3, 4, 2)), 0.0); }

TEST(Entropy, UniformCubeIsNLogD) { EXPECT_NEAR(entropy(uniform_law(2, 3)), 3 * kLog2, 1e-12); }

TEST(Entropy, DiagonalIsLog2) { EXPECT_NEAR(entropy(diagonal_law()), kLog2, 1e-15); }

TEST(Entropy, FixedDenseLawMatchesOracle) {
  // weights 1..27 over 378
  std::vector<double> p(27);
  std::iota(p.begin(), p.end(), 1.0);
  for (auto& v : p) v /= 378.0;
  EXPECT_NEAR(entropy(SystemLaw::dense(3, 3, p)), 3.1198155056628112671, 1e-13);
}

TEST(SystemLawValidation, RejectsBadMassAndShapes) {
  EXPECT_THROW(SystemLaw::dense(2, 1, {0.45, 0.45}), ValidationError);
  EXPECT_THROW(SystemLaw::dense(2, 2, {0.5, 0.5}), ValidationError);
  EXPECT_THROW(SystemLaw::dense(2, 1, {1.5, -0.5}), ValidationError);
  EXPECT_THROW(SystemLaw::dense(1, 1, {1.0}), ValidationError);
  EXPECT_THROW(SystemLaw::sparse(2, 2, {{{0, 2}, 1.0}}), ValidationError);
  EXPECT_THROW(SystemLaw::sparse(2, 2, {{{0}, 1.0}}), ValidationError);
  try {
    SystemLaw::dense(2, 1, {0.45, 0.45});
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("mass"), std::string::npos);
  }
}

TEST(SystemLawValidation, RenormalizesWithinTolerance) {
  const SystemLaw law = SystemLaw::dense(2, 1, {0.5 + 4e-10, 0.5});
  EXPECT_NEAR(law.dense_probabilities()[0] + law.dense_probabilities()[1], 1.0, 1e-15);
}

TEST(SystemLaw, SparseRejectsRepeatsAndDropsZeros) {
  EXPECT_THROW(SystemLaw::sparse(2, 2, {{{1, 0}, 0.25}, {{0, 1}, 0.5}, {{1, 0}, 0.25}}), ValidationError);
  const SystemLaw law = SystemLaw::sparse(2, 2, {{{1, 0}, 0.5}, {{0, 1}, 0.5}, {{1, 1}, 0.0}});
  EXPECT_EQ(law.support_size(), 2u);
  EXPECT_NEAR(entropy(law), kLog2, 1e-15);
}

TEST(SystemLaw, PointsMergeDuplicatesWhenAsked) {
  WeightedPoints points;
  points.n = 2;
  points.symbols = {1, 0, 0, 1, 1, 0, 1, 1};
  points.weights = {0.25, 0.5, 0.25, 0.0};
  const SystemLaw law = SystemLaw::from_points(2, points, true);
  EXPECT_EQ(law.support_size(), 2u);
  EXPECT_NEAR(entropy(law), kLog2, 1e-15);
  EXPECT_THROW(SystemLaw::from_points(2, points, false), ValidationError);
}

TEST(ConfigurationIndex, FirstCoordinateMostSignificant) {
  const std::vector<std::uint32_t> symbols{1, 0, 2};
  EXPECT_EQ(configuration_index(symbols, 3), 1u * 9 + 0 * 3 + 2);
  EXPECT_EQ(configuration_at(11, 3, 3), (Configuration{1, 0, 2}));
}

TEST(Marginal, FullSetIsIdentity) {
  Rng rng(3);
  const SystemLaw law = random_dense_law(rng, 3, 3);
  const auto original = dense_of(law);
  const auto projected = dense_of(marginal(law, SubsetMask::full(3)));
  ASSERT_EQ(original.size(), projected.size());
  for (std::size_t i = 0; i < original.size(); ++i) EXPECT_NEAR(original[i], projected[i], 1e-15);
}

TEST(Marginal, EmptySetIsUnitMass) {
  const SystemLaw m = marginal(diagonal_law(), SubsetMask{});
  EXPECT_EQ(m.n(), 0);
  EXPECT_EQ(m.support_size(), 1u);
  EXPECT_EQ(entropy(m), 0.0);
}

TEST(Marginal, DiagonalFirstCoordinateIsUniform) {
  const auto p = dense_of(marginal(diagonal_law(), SubsetMask::of({0})));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(Marginal, DenseAndSparsePathsAgree) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemLaw dense = random_dense_law(rng, 3, 4, 0.6);
    const WeightedPoints points = dense.support();
    const SystemLaw sparse = SystemLaw::from_points(3, points, true);
    ASSERT_FALSE(sparse.is_dense());
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      const auto a = dense_of(marginal(dense, SubsetMask(mask)));
      const auto b = dense_of(marginal(sparse, SubsetMask(mask)));
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
    }
  }
}

TEST(Marginal, RejectsMaskOutsideSystem) {
  EXPECT_THROW(marginal(diagonal_law(), SubsetMask::of({2})), std::out_of_range);
}

TEST(SubsetEntropy, Examples) {
  EXPECT_NEAR(subset_entropy(uniform_law(2, 4), SubsetMask::of({0, 2, 3})), 3 * kLog2, 1e-12);
  EXPECT_NEAR(subset_entropy(diagonal_law(), SubsetMask::of({1})), kLog2, 1e-15);
  EXPECT_EQ(subset_entropy(diagonal_law(), SubsetMask{}), 0.0);
}

TEST(MutualInformation, Examples) {
  Rng rng(5);
  const SystemLaw product = random_product_law(rng, 3, 4);
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    EXPECT_NEAR(mutual_information(product, SubsetMask(mask)), 0.0, 1e-12);
  }
  EXPECT_NEAR(mutual_information(diagonal_law(), SubsetMask::of({0})), kLog2, 1e-15);
  EXPECT_EQ(mutual_information(diagonal_law(), SubsetMask{}), 0.0);
  EXPECT_EQ(mutual_information(diagonal_law(), SubsetMask::full(2)), 0.0);
}

TEST(MutualInformation, SymmetricInComplement) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemLaw law = random_dense_law(rng, 2, 5, 0.3);
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
      const SubsetMask s(mask);
      EXPECT_NEAR(mutual_information(law, s), mutual_information(law, s.complement(5)), 1e-13);
    }
  }
}

TEST(ConditionalEntropy, Examples) {
  EXPECT_NEAR(conditional_entropy(uniform_law(2, 4), SubsetMask::full(4)), 0.0, 1e-12);
  EXPECT_NEAR(conditional_entropy(uniform_law(2, 4), SubsetMask::of({1})), 3 * kLog2, 1e-12);
  EXPECT_NEAR(conditional_entropy(diagonal_law(), SubsetMask::of({0})), 0.0, 1e-15);
}

TEST(Profile, Examples) {
  const EntropyProfile product = entropy_profile_exact(uniform_law(2, 5));
  for (int k = 0; k <= 5; ++k) EXPECT_NEAR(product.at(k), k / 5.0, 1e-12);

  const EntropyProfile diag = entropy_profile_exact(diagonal_law());
  EXPECT_EQ(diag.values.size(), 3u);
  EXPECT_EQ(diag.at(0), 0.0);
  EXPECT_NEAR(diag.at(1), 0.5, 1e-15);
  EXPECT_NEAR(diag.at(2), 0.5, 1e-15);

  for (double v : entropy_profile_exact(constant_law(3, 4)).values) EXPECT_EQ(v, 0.0);
}

TEST(Profile, ExhaustiveCapRaisesSizeError) {
  const SystemLaw law = constant_law(2, 10);
  EXPECT_THROW(entropy_profile_exact(law, Caps{8, Caps{}.max_support}), SizeError);
  EXPECT_NO_THROW(entropy_profile_exact(law, Caps{10, Caps{}.max_support}));
}

TEST(Profile, GammaViolationsDetected) {
  EXPECT_TRUE((EntropyProfile{2, {0.0, 0.5, 0.5}}.gamma_violations().empty()));
  EXPECT_FALSE((EntropyProfile{2, {0.1, 0.5, 0.5}}.gamma_violations().empty()));
  EXPECT_FALSE((EntropyProfile{2, {0.0, 0.7, 0.8}}.gamma_violations().empty()));
  EXPECT_FALSE((EntropyProfile{2, {0.0, 0.5, 0.4}}.gamma_violations().empty()));
}

TEST(SampledProfile, ProductLawHasNoVariance) {
  const SystemLaw law = uniform_law(2, 8);
  const std::vector<int> sizes{1, 3, 6};
  const SampledProfile p = entropy_profile_sampled(law, sizes, 50, 99);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    EXPECT_NEAR(p.mean[i], sizes[i] / 8.0, 1e-12);
    EXPECT_NEAR(p.standard_error[i], 0.0, 1e-12);
  }
}

TEST(SampledProfile, DiagonalSingletonsAreHalf) {
  const std::vector<int> sizes{1};
  const SampledProfile p = entropy_profile_sampled(diagonal_law(), sizes, 100, 1);
  EXPECT_NEAR(p.mean[0], 0.5, 1e-15);
}

TEST(SampledProfile, ExhaustionMatchesExact) {
  Rng rng(21);
  const SystemLaw law = random_dense_law(rng, 2, 7, 0.5);
  const EntropyProfile exact = entropy_profile_exact(law);
  std::vector<int> sizes(8);
  std::iota(sizes.begin(), sizes.end(), 0);
  const SampledProfile p = entropy_profile_sampled(law, sizes, 35, 4, true);
  for (int k = 0; k <= 7; ++k) {
    EXPECT_TRUE(p.exhaustive[static_cast<std::size_t>(k)]);
    EXPECT_NEAR(p.mean[static_cast<std::size_t>(k)], exact.at(k), 1e-12);
  }
}

TEST(SampledProfile, DeterministicPerSeed) {
  Rng rng(2);
  const SystemLaw law = random_dense_law(rng, 2, 10, 0.9);
  const std::vector<int> sizes{3, 5};
  const auto a = entropy_profile_sampled(law, sizes, 20, 17);
  const auto b = entropy_profile_sampled(law, sizes, 20, 17);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_THROW(entropy_profile_sampled(law, sizes, 1, 17), std::invalid_argument);
}

// Every subset entropy, dense and sparse, against the configuration-level
// reference for all d <= 3, N <= 4.
TEST(BruteForce, SubsetEntropiesMatchReference) {
  Rng rng(1234);
  for (int d = 2; d <= 3; ++d) {
    for (int n = 1; n <= 4; ++n) {
      for (int trial = 0; trial < 5; ++trial) {
        const SystemLaw law = random_dense_law(rng, d, n, trial % 2 ? 0.5 : 0.0);
        const auto dense = dense_of(law);
        const SystemLaw sparse = SystemLaw::from_points(d, law.support(), true);
        const auto table = subset_entropy_table(law);
        const auto sparse_table = subset_entropy_table(sparse);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          const double expected = naive_subset_entropy(dense, d, n, mask);
          EXPECT_NEAR(subset_entropy(law, SubsetMask(mask)), expected, 1e-12);
          EXPECT_NEAR(table[mask], expected, 1e-12);
          EXPECT_NEAR(sparse_table[mask], expected, 1e-12);
        }
      }
    }
  }
}

// Shannon inequalities over random laws: bounds, monotonicity, and
// subadditivity on disjoint pairs.
TEST(Properties, ShannonInequalities) {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const int n = 2 + static_cast<int>(rng.below(4));
    const SystemLaw law = random_dense_law(rng, d, n, rng.uniform() * 0.8);
    const auto h = subset_entropy_table(law);
    const double log_d = std::log(static_cast<double>(d));
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t s = 0; s < count; ++s) {
      EXPECT_GE(h[s], -1e-9);
      EXPECT_LE(h[s], std::popcount(s) * log_d + 1e-9);
      for (std::uint64_t t = 0; t < count; ++t) {
        if ((s & t) == s) EXPECT_LE(h[s], h[t] + 1e-9);
        if ((s & t) == 0) EXPECT_LE(h[s | t], h[s] + h[t] + 1e-9);
      }
    }
  }
}

TEST(Properties, ExactProfilesLieInGamma) {
  Rng rng(78);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(7));
    const SystemLaw law = random_dense_law(rng, 2, n, rng.uniform());
    const auto violations = entropy_profile_exact(law).gamma_violations(1e-9);
    EXPECT_TRUE(violations.empty()) << violations.front();
  }
}

// H_{k+l} - H_k <= H_{j+l} - H_j for j <= k.
TEST(Properties, AveragedIncrementsDecrease) {
  Rng rng(79);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const int d = 2 + static_cast<int>(rng.below(2));
    const SystemLaw law = random_dense_law(rng, d, n, rng.uniform() * 0.9);
    const EntropyProfile p = entropy_profile_exact(law);
    const double scale = n * std::log(static_cast<double>(d));
    auto big_h = [&](int k) { return scale * p.at(k); };
    for (int j = 0; j <= n; ++j) {
      for (int k = j; k <= n; ++k) {
        for (int l = 0; k + l <= n; ++l) {
          EXPECT_LE(big_h(k + l) - big_h(k), big_h(j + l) - big_h(j) + 1e-8);
        }
      }
    }
  }
}

TEST(SubsetWalker, HashedRelabelingMatchesDirectTable) {
  // d^N far above the direct relabel table forces the hashed path.
  Rng rng(31);
  WeightedPoints points;
  points.n = 12;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 12; ++j) points.symbols.push_back(static_cast<std::uint32_t>(rng.below(40)));
    points.weights.push_back(rng.exponential());
  }
  const double total = std::accumulate(points.weights.begin(), points.weights.end(), 0.0);
  for (auto& w : points.weights) w /= total;
  const SystemLaw law = SystemLaw::from_points(40, points, true);
  const auto table = subset_entropy_table(law);
  for (std::uint64_t mask : {0ULL, 1ULL, 6ULL, 0x555ULL, 0xFFFULL, 0x800ULL}) {
    EXPECT_NEAR(table[mask], subset_entropy(law, SubsetMask(mask)), 1e-12);
  }
}

TEST(Transforms, PermuteAndRelabel) {
  const SystemLaw law = SystemLaw::sparse(3, 3, {{{0, 1, 2}, 0.6}, {{2, 2, 0}, 0.4}});
  const std::vector<int> sigma{2, 0, 1};
  const SystemLaw permuted = law.permute_coordinates(sigma);
  const auto pts = permuted.support();
  // new coordinate j holds old coordinate sigma[j]
  bool found = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto p = pts.point(i);
    if (p[0] == 2 && p[1] == 0 && p[2] == 1) found = std::abs(pts.weights[i] - 0.6) < 1e-15;
  }
  EXPECT_TRUE(found);
  EXPECT_THROW(law.permute_coordinates(std::vector<int>{0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(law.relabel_symbols({{0, 1, 2}, {0, 1, 2}}), std::invalid_argument);
  const SystemLaw relabeled = law.relabel_symbols({{2, 1, 0}, {1, 2, 0}, {0, 2, 1}});
  EXPECT_NEAR(entropy(relabeled), entropy(law), 1e-15);
}

}  // namespace
