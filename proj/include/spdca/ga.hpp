#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spdca/grid.hpp"
#include "spdca/payoff.hpp"
#include "spdca/rng.hpp"

namespace spdca {

struct Solution {
  Pattern pattern;
  double fitness;  // tps(pattern) under the run's payoff params
};

using Population = std::vector<Solution>;

struct GaConfig {
  int population_size = 40;
  double p1 = 0.2;   // per-bit probability of taking the mate's bit
  double p2 = 0.05;  // per-bit mutation probability
  long max_iterations = 10000;
  std::optional<double> target_fitness;
  std::uint64_t seed = 1;
  PayoffParams payoff;

  void validate() const {
    if (population_size < 2) throw std::invalid_argument("population size must be >= 2");
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("p1 must lie in [0, 1]");
    if (!(p2 >= 0.0 && p2 <= 1.0)) throw std::invalid_argument("p2 must lie in [0, 1]");
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  }
};

inline Population init_population(const GaConfig& cfg, int n, Rng& rng) {
  cfg.validate();
  Population pop;
  pop.reserve(static_cast<std::size_t>(cfg.population_size));
  const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  for (int s = 0; s < cfg.population_size; ++s) {
    std::vector<Cell> bits(cells);
    for (Cell& b : bits) b = static_cast<Cell>(rng.next() >> 63);
    Pattern p(n, std::move(bits));
    const double f = tps(p, cfg.payoff);
    pop.push_back({std::move(p), f});
  }
  return pop;
}

/// Uniform crossover (each bit from the mate with probability p1), then
/// independent per-bit mutation with probability p2.
inline Pattern make_offspring(const Solution& parent, const Solution& mate, const GaConfig& cfg, Rng& rng) {
  const auto a = parent.pattern.cells();
  const auto b = mate.pattern.cells();
  std::vector<Cell> child(a.begin(), a.end());
  for (std::size_t k = 0; k < child.size(); ++k) {
    if (rng.chance(cfg.p1)) child[k] = b[k];
    if (rng.chance(cfg.p2)) child[k] ^= 1;
  }
  return Pattern(parent.pattern.size(), std::move(child));
}

/// One sweep over the population. Slot i is replaced by its offspring only if
/// the offspring is strictly fitter and no current member has the same
/// cells. Later slots see earlier replacements. Returns the replacement count.
inline int ga_step(Population& pop, const GaConfig& cfg, Rng& rng) {
  int replaced = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const std::size_t j = rng.below(pop.size());
    Pattern child = make_offspring(pop[i], pop[j], cfg, rng);
    const double f = tps(child, cfg.payoff);
    if (f <= pop[i].fitness) continue;
    const bool duplicate =
        std::any_of(pop.begin(), pop.end(), [&](const Solution& s) { return s.pattern == child; });
    if (duplicate) continue;
    pop[i] = {std::move(child), f};
    ++replaced;
  }
  return replaced;
}

inline void sort_by_fitness(Population& pop) {
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Solution& a, const Solution& b) { return a.fitness > b.fitness; });
}

inline double best_fitness(const Population& pop) {
  double best = pop.front().fitness;
  for (const Solution& s : pop) best = std::max(best, s.fitness);
  return best;
}

struct GaResult {
  Population population;    // sorted, best first
  long iterations_used = 0;
  long best_found_at = 0;   // first iteration after which the final best was present
};

inline GaResult run_ga(const GaConfig& cfg, int n) {
  cfg.validate();
  Rng rng(cfg.seed);
  GaResult result;
  result.population = init_population(cfg, n, rng);

  double best = best_fitness(result.population);
  long it = 0;
  while (it < cfg.max_iterations && !(cfg.target_fitness && best >= *cfg.target_fitness)) {
    ga_step(result.population, cfg, rng);
    ++it;
    const double now = best_fitness(result.population);
    if (now > best) {
      best = now;
      result.best_found_at = it;
    }
  }
  result.iterations_used = it;
  sort_by_fitness(result.population);
  return result;
}

}  // namespace spdca
