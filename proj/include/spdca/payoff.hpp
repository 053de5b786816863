#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "spdca/grid.hpp"

namespace spdca {

/// Prisoner's-dilemma payoffs for the spatial game. State 0 cooperates,
/// state 1 defects. With self-play the cell also plays against itself, so
/// the game runs over the full 3x3 window (K = 9); without it, over the
/// eight outer neighbors (K = 8).
struct PayoffParams {
  double T = 3.0;  // defect against a cooperator
  double R = 1.0;  // both cooperate
  double P = 0.0;  // both defect
  double S = 0.0;  // cooperate against a defector
  bool self_play = true;

  int K() const noexcept { return self_play ? 9 : 8; }

  /// Payoff to a player in state `self` against an opponent in state `other`.
  double game(Cell self, Cell other) const noexcept {
    if (self == 0) return other == 0 ? R : S;
    return other == 0 ? T : P;
  }
};

inline double cell_total_payoff(const Pattern& p, Coord c, const PayoffParams& params = {}) {
  const Cell self = p.at(c);
  double total = 0.0;
  for (std::size_t k = params.self_play ? 0 : 1; k < moore_offsets.size(); ++k)
    total += params.game(self, p(c.i + moore_offsets[k].first, c.j + moore_offsets[k].second));
  return total;
}

inline double cell_utility(const Pattern& p, Coord c, const PayoffParams& params = {}) {
  return cell_total_payoff(p, c, params) / params.K();
}

/// Total payoff sum over all cells; the GA fitness.
inline double tps(const Pattern& p, const PayoffParams& params = {}) {
  const int n = p.size();
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum += cell_total_payoff(p, {i, j}, params);
  return sum;
}

inline double wealth_from_tps(double total, int n, const PayoffParams& params = {}) {
  return total / (static_cast<double>(params.K()) * n * n);
}

/// Mean normalized payoff per cell when all income is shared.
inline double wealth(const Pattern& p, const PayoffParams& params = {}) {
  return wealth_from_tps(tps(p, params), p.size(), params);
}

/// Mean-field wealth estimate for a population cooperating at rate pi_c.
inline double expected_wealth(double pi_c, const PayoffParams& params = {}) {
  if (!(pi_c >= 0.0 && pi_c <= 1.0))
    throw std::domain_error("cooperation rate must lie in [0, 1], got " + std::to_string(pi_c));
  const double pi_d = 1.0 - pi_c;
  const double payoff_d = params.P * pi_d + params.T * pi_c;
  const double payoff_c = params.R * pi_c + params.S * pi_d;
  return pi_d * payoff_d + pi_c * payoff_c;
}

/// Pattern summary (W, TPS; n, n^2, b, b/n^2), b = number of defectors.
struct Characteristic {
  double wealth = 0.0;
  double tps = 0.0;
  int n = 0;
  int cells = 0;
  int ones = 0;
  double density = 0.0;
};

inline Characteristic characteristic(const Pattern& p, const PayoffParams& params = {}) {
  Characteristic cc;
  cc.n = p.size();
  cc.cells = cc.n * cc.n;
  cc.tps = tps(p, params);
  cc.wealth = wealth_from_tps(cc.tps, cc.n, params);
  cc.ones = p.ones();
  cc.density = static_cast<double>(cc.ones) / cc.cells;
  return cc;
}

}  // namespace spdca
