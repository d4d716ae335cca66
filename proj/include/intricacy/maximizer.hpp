#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "intricacy/coefficients.hpp"
#include "intricacy/information.hpp"

namespace intricacy {

struct MaximizerConfig {
  int d = 2;
  int n = 2;
  CoefficientTable table;
  int restarts = 10;
  int iterations = 400;
  std::uint64_t seed = 0;
  /// When set, the objective subtracts weight * (x - target)^2 with the
  /// weight escalating from penalty_weight to 100 * penalty_weight.
  std::optional<double> target_x;
  double penalty_weight = 1.0;
  /// Initial mirror step; the step at iteration t is step / sqrt(1 + t).
  double step = 2.0;
  int max_n = 6;
  int max_d = 3;
};

struct RestartOutcome {
  int restart = 0;
  double intricacy = 0.0;             // nats
  double normalized_intricacy = 0.0;  // I / (N log d)
  double x = 0.0;                     // H / (N log d)
  double certificate = 0.0;           // i^c_N(x) - normalized_intricacy
};

struct MaximizerResult {
  SystemLaw law;
  RestartOutcome best;
  std::vector<RestartOutcome> restarts;
};

/// Exponentiated-gradient ascent of the intricacy over the simplex of dense
/// laws on {0,...,d-1}^N, from Dirichlet(1) starting points. Returns the
/// best restart; every outcome carries the ceiling gap i^c_N(x) - I/(N log d),
/// which is nonnegative for any law. Throws SizeError past max_n / max_d.
MaximizerResult maximizer_search(const MaximizerConfig& config);

}  // namespace intricacy
