#include "intricacy/maximizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intricacy/intricacy.hpp"
#include "intricacy/rng.hpp"

namespace intricacy {

namespace {

// For every subset S, the index of x_S in {0,...,d-1}^|S| for every x.
std::vector<std::vector<std::uint32_t>> projection_indices(int d, int n) {
  const std::size_t points = checked_power(d, n, std::numeric_limits<std::uint32_t>::max());
  std::vector<std::vector<std::uint32_t>> proj(std::size_t{1} << n, std::vector<std::uint32_t>(points));
  for (std::size_t x = 0; x < points; ++x) {
    const Configuration config = configuration_at(x, d, n);
    for (std::size_t mask = 0; mask < proj.size(); ++mask) {
      std::uint32_t index = 0;
      for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1U) index = index * static_cast<std::uint32_t>(d) + static_cast<std::uint32_t>(config[static_cast<std::size_t>(i)]);
      }
      proj[mask][x] = index;
    }
  }
  return proj;
}

void normalize_logs(std::vector<double>& log_p, std::vector<double>& p) {
  const double top = *std::max_element(log_p.begin(), log_p.end());
  double total = 0.0;
  for (auto& v : log_p) {
    v = std::max(v, top - 700.0);
    total += std::exp(v - top);
  }
  const double shift = top + std::log(total);
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    log_p[i] -= shift;
    p[i] = std::exp(log_p[i]);
  }
}

}  // namespace

MaximizerResult maximizer_search(const MaximizerConfig& config) {
  const int d = config.d;
  const int n = config.n;
  if (d < 2 || n < 1) throw ValidationError("maximizer needs d >= 2 and N >= 1");
  if (n > config.max_n || d > config.max_d) {
    throw SizeError("dense maximizer search is capped at N <= " + std::to_string(config.max_n) +
                    ", d <= " + std::to_string(config.max_d));
  }
  if (config.table.n != n) throw std::invalid_argument("coefficient table size differs from N");
  if (config.restarts < 1 || config.iterations < 0) throw std::invalid_argument("bad restart/iteration count");

  const auto proj = projection_indices(d, n);
  const std::size_t points = proj[0].size();
  const std::size_t masks = proj.size();
  const double scale = n * std::log(static_cast<double>(d));
  std::vector<std::size_t> cells(masks);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    cells[mask] = static_cast<std::size_t>(std::pow(d, std::popcount(mask)) + 0.5);
  }

  Rng rng(config.seed);
  std::vector<std::vector<double>> marginals(masks);
  for (std::size_t mask = 0; mask < masks; ++mask) marginals[mask].resize(cells[mask]);

  // Fills the marginals and returns (normalized intricacy, normalized entropy).
  auto evaluate = [&](const std::vector<double>& p) {
    double weighted = 0.0;
    double h_full = 0.0;
    for (std::size_t mask = 1; mask < masks; ++mask) {
      auto& q = marginals[mask];
      std::fill(q.begin(), q.end(), 0.0);
      for (std::size_t x = 0; x < points; ++x) q[proj[mask][x]] += p[x];
      const double h = entropy_of_masses(q);
      weighted += config.table.at(std::popcount(mask)) * h;
      if (mask == masks - 1) h_full = h;
    }
    return std::make_pair((2.0 * weighted - h_full) / scale, h_full / scale);
  };

  std::vector<RestartOutcome> outcomes;
  std::optional<SystemLaw> best_law;
  RestartOutcome best;
  double best_score = -std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < config.restarts; ++restart) {
    std::vector<double> log_p(points);
    std::vector<double> p(points);
    for (auto& v : log_p) v = std::log(rng.exponential() + std::numeric_limits<double>::min());
    normalize_logs(log_p, p);

    std::vector<double> best_p = p;
    double restart_best = -std::numeric_limits<double>::infinity();
    std::vector<double> grad(points);
    for (int t = 0; t <= config.iterations; ++t) {
      const auto [intricacy, x] = evaluate(p);
      double weight = 0.0;
      double score = intricacy;
      if (config.target_x) {
        const double progress = config.iterations > 0 ? static_cast<double>(t) / config.iterations : 1.0;
        weight = config.penalty_weight * std::pow(100.0, progress);
        // Iterates are ranked under the final weight so early ones are not favoured.
        score -= 100.0 * config.penalty_weight * (x - *config.target_x) * (x - *config.target_x);
      }
      if (score > restart_best) {
        restart_best = score;
        best_p = p;
      }
      if (t == config.iterations) break;

      // dH_S/dp(x) = -log q_S(x_S) - 1; the constants cancel on the simplex.
      for (std::size_t xi = 0; xi < points; ++xi) {
        double g = 0.0;
        for (std::size_t mask = 1; mask < masks; ++mask) {
          g -= 2.0 * config.table.at(std::popcount(mask)) * std::log(marginals[mask][proj[mask][xi]]);
        }
        g += log_p[xi];
        if (config.target_x) g += 2.0 * weight * (x - *config.target_x) * log_p[xi];
        grad[xi] = g / scale;
      }
      const double eta = config.step / std::sqrt(1.0 + t);
      for (std::size_t xi = 0; xi < points; ++xi) log_p[xi] += eta * grad[xi];
      normalize_logs(log_p, p);
    }

    SystemLaw law = SystemLaw::dense(d, n, best_p);
    RestartOutcome outcome;
    outcome.restart = restart;
    outcome.intricacy = intricacy_defn(law, config.table);
    outcome.normalized_intricacy = outcome.intricacy / scale;
    outcome.x = std::clamp(entropy(law) / scale, 0.0, 1.0);
    outcome.certificate = ic_n(outcome.x, config.table) - outcome.normalized_intricacy;
    outcomes.push_back(outcome);
    if (restart_best > best_score) {
      best_score = restart_best;
      best = outcome;
      best_law = std::move(law);
    }
  }
  return {std::move(*best_law), best, std::move(outcomes)};
}

}  // namespace intricacy
