#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spdca/ca.hpp"
#include "spdca/ga.hpp"
#include "spdca/grid.hpp"
#include "spdca/payoff.hpp"
#include "spdca/rng.hpp"

namespace spdca {

// ---------------------------------------------------------------------------
// Structure

/// A 1 whose eight Moore neighbors are all 0.
inline int count_points(const Pattern& p) {
  const int n = p.size();
  int count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!p(i, j)) continue;
      bool isolated = true;
      for (std::size_t k = 1; k < moore_offsets.size() && isolated; ++k)
        isolated = p(i + moore_offsets[k].first, j + moore_offsets[k].second) == 0;
      count += isolated;
    }
  return count;
}

namespace detail {

// Horizontal pair at (i, j), (i, j+1) with an all-zero 3x4 hull.
inline bool horizontal_domino(const Pattern& p, int i, int j) {
  if (!p(i, j) || !p(i, j + 1)) return false;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 2; ++dj) {
      if (di == 0 && (dj == 0 || dj == 1)) continue;
      if (p(i + di, j + dj)) return false;
    }
  return true;
}

inline bool vertical_domino(const Pattern& p, int i, int j) {
  if (!p(i, j) || !p(i + 1, j)) return false;
  for (int di = -1; di <= 2; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      if (dj == 0 && (di == 0 || di == 1)) continue;
      if (p(i + di, j + dj)) return false;
    }
  return true;
}

}  // namespace detail

/// Adjacent 1-pairs (either orientation) whose ten surrounding cells are 0.
inline int count_dominoes(const Pattern& p) {
  const int n = p.size();
  int count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) count += detail::horizontal_domino(p, i, j) + detail::vertical_domino(p, i, j);
  return count;
}

/// Top-left corners of 2x2 all-zero blocks that do not extend to a 2x3 or
/// 3x2 all-zero block.
inline std::vector<Coord> detect_singularities(const Pattern& p) {
  const int n = p.size();
  std::vector<Coord> found;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (p(i, j) || p(i, j + 1) || p(i + 1, j) || p(i + 1, j + 1)) continue;
      const bool left = p(i, j - 1) || p(i + 1, j - 1);
      const bool right = p(i, j + 2) || p(i + 1, j + 2);
      const bool above = p(i - 1, j) || p(i - 1, j + 1);
      const bool below = p(i + 2, j) || p(i + 2, j + 1);
      if (left && right && above && below) found.push_back({i, j});
    }
  return found;
}

struct StructureReport {
  int points = 0;
  int dominoes = 0;
  int singularities = 0;
  int ones = 0;
  int zero_cells = 0;
};

inline StructureReport analyze_structure(const Pattern& p) {
  StructureReport r;
  r.points = count_points(p);
  r.dominoes = count_dominoes(p);
  r.singularities = static_cast<int>(detect_singularities(p).size());
  r.ones = p.ones();
  r.zero_cells = static_cast<int>(p.cell_count()) - r.ones;
  return r;
}

// ---------------------------------------------------------------------------
// Optimal families

namespace detail {

inline int odd_family_m(int n) {
  if (n < 5 || n % 2 == 0) throw std::domain_error("odd-size formulas need odd n >= 5, got " + std::to_string(n));
  return (n - 5) / 2;
}

}  // namespace detail

/// Best TPS for odd n >= 5: 265 + 128m + 43m(m+2), m = (n-5)/2.
inline long tps_formula_odd(int n) {
  const long m = detail::odd_family_m(n);
  return 265 + 128 * m + 43 * m * (m + 2);
}

inline double wealth_formula_odd(int n) {
  return static_cast<double>(tps_formula_odd(n)) / (9.0 * n * n);
}

inline int domino_count_formula(int n) {
  detail::odd_family_m(n);
  return n - 1;
}

inline int point_count_formula(int n) {
  const int m = detail::odd_family_m(n);
  return m + m * (m + 1);
}

inline int ones_count_formula(int n) { return 2 * domino_count_formula(n) + point_count_formula(n); }

/// Unique 5x5 optimum (TPS 265): four dominoes around one singularity.
inline Pattern optimal_5x5() {
  return parse_pattern("10110\n10000\n00010\n11010\n00000\n");
}

/// Grows the 5x5 optimum two rows and two columns at a time. For the step to
/// size k+2 (m = (k-3)/2): row k gets 110(10)^m left to right, column k gets
/// (10)^m110 top to bottom, cell (k, k) is set, and row/column k+1 stay
/// empty. Each step adds one domino per border plus points.
inline Pattern construct_optimal_odd(int n) {
  detail::odd_family_m(n);
  Pattern cur = optimal_5x5();
  while (cur.size() < n) {
    const int k = cur.size();
    const int m = (k + 2 - 5) / 2;
    std::string row = "110", col;
    for (int r = 0; r < m; ++r) {
      row += "10";
      col += "10";
    }
    col += "110";

    Pattern next(k + 2);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) next.set(i, j, cur(i, j));
    for (int j = 0; j < k; ++j) next.set(k, j, row[static_cast<std::size_t>(j)] == '1');
    for (int i = 0; i < k; ++i) next.set(i, k, col[static_cast<std::size_t>(i)] == '1');
    next.set(k, k, 1);
    cur = std::move(next);
  }
  return cur;
}

/// Ones at (2a, 2b) for every 2a, 2b <= n-2. For even n this is the full
/// point lattice; for odd n the last two rows and columns stay empty.
inline Pattern point_filled(int n) {
  Pattern p(n);
  for (int i = 0; i <= n - 2; i += 2)
    for (int j = 0; j <= n - 2; j += 2) p.set(i, j, 1);
  return p;
}

/// Best known TPS for default parameters: 91 for n = 3, the point lattice
/// value 43n^2/4 for even n, the closed form for odd n >= 5.
inline double known_optimum_tps(int n) {
  if (n == 3) return 91.0;
  if (n % 2 == 0) return 43.0 * n * n / 4.0;
  return static_cast<double>(tps_formula_odd(n));
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

struct OracleResult {
  int n = 0;
  double max_tps = 0.0;
  std::uint64_t n_optima = 0;             // raw count of maximizing patterns
  std::vector<Pattern> representatives;   // one per shift/rotation/reflection class
  bool representatives_complete = true;
};

namespace detail {

inline constexpr std::size_t kOracleArgmaxCap = std::size_t{1} << 20;

}  // namespace detail

/// Enumerates all 2^(n^2) patterns. Supports n <= 4; n = 5 (2^25 patterns)
/// only with allow_5.
inline OracleResult brute_force_oracle(int n, const PayoffParams& params = {}, bool allow_5 = false,
                                       unsigned jobs = 1) {
  if (n < Pattern::min_size) throw std::invalid_argument("oracle needs n >= 3");
  if (n > 5 || (n == 5 && !allow_5))
    throw std::invalid_argument("oracle size error: n = " + std::to_string(n) +
                                " exceeds the supported bound (n <= 4, or 5 when enabled)");
  const int cells = n * n;
  std::vector<std::uint32_t> nb(static_cast<std::size_t>(cells));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::uint32_t m = 0;
      for (std::size_t k = params.self_play ? 0 : 1; k < moore_offsets.size(); ++k)
        m |= 1u << (wrap_index(i + moore_offsets[k].first, n) * n + wrap_index(j + moore_offsets[k].second, n));
      nb[static_cast<std::size_t>(i * n + j)] = m;
    }
  const int opponents = params.K();
  const std::uint64_t total = std::uint64_t{1} << cells;

  auto score = [&](std::uint32_t mask) {
    double s = 0.0;
    for (int c = 0; c < cells; ++c) {
      const int d = std::popcount(mask & nb[static_cast<std::size_t>(c)]);
      const int coop = opponents - d;
      s += (mask >> c) & 1u ? coop * params.T + d * params.P : coop * params.R + d * params.S;
    }
    return s;
  };
  auto tol = [](double v) { return 1e-9 * std::max(1.0, std::abs(v)); };

  struct Partial {
    double best = -1e300;
    std::uint64_t count = 0;
    std::vector<std::uint32_t> argmax;
    bool truncated = false;
  };
  jobs = std::max(1u, jobs);
  std::vector<Partial> parts(jobs);
  auto work = [&](unsigned w) {
    Partial& pt = parts[w];
    const std::uint64_t lo = total * w / jobs, hi = total * (w + 1) / jobs;
    for (std::uint64_t x = lo; x < hi; ++x) {
      const auto mask = static_cast<std::uint32_t>(x);
      const double s = score(mask);
      if (s > pt.best + tol(pt.best)) {
        pt.best = s;
        pt.count = 0;
        pt.argmax.clear();
        pt.truncated = false;
      }
      if (std::abs(s - pt.best) <= tol(pt.best)) {
        ++pt.count;
        if (pt.argmax.size() < detail::kOracleArgmaxCap) pt.argmax.push_back(mask);
        else pt.truncated = true;
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  OracleResult res;
  res.n = n;
  res.max_tps = -1e300;
  for (const Partial& pt : parts) res.max_tps = std::max(res.max_tps, pt.best);
  std::vector<Pattern> reps;
  for (const Partial& pt : parts) {
    if (std::abs(pt.best - res.max_tps) > tol(res.max_tps)) continue;
    res.n_optima += pt.count;
    res.representatives_complete = res.representatives_complete && !pt.truncated;
    for (std::uint32_t mask : pt.argmax) {
      std::vector<Cell> bits(static_cast<std::size_t>(cells));
      for (int c = 0; c < cells; ++c) bits[static_cast<std::size_t>(c)] = (mask >> c) & 1u;
      Pattern canon = canonical(Pattern(n, std::move(bits)));
      if (std::find(reps.begin(), reps.end(), canon) == reps.end()) reps.push_back(std::move(canon));
    }
  }
  std::sort(reps.begin(), reps.end());
  res.representatives = std::move(reps);
  return res;
}

// ---------------------------------------------------------------------------
// Experiment harness

struct RunRecord {
  std::uint64_t seed = 0;
  double w_max = 0.0;
  double tps_max = 0.0;
  long t_max = 0;      // first generation / iteration where w_max was reached
  bool stable = false;
  double tps_final = 0.0;
};

struct ExperimentSummary {
  std::size_t n_runs = 0;
  long t_limit = 0;
  double w_max_max = 0.0;
  double w_max_avrg = 0.0;
  double t_avrg = 0.0;
  long t_min = 0;
  long t_max = 0;
  std::optional<double> optimum_tps;
  std::size_t n_opt_found = 0;
  std::size_t n_stable = 0;
  std::vector<std::pair<double, std::size_t>> wealth_histogram;  // W rounded to 4 decimals
  std::vector<RunRecord> runs;
};

inline double round4(double w) { return std::round(w * 1e4) / 1e4; }

inline ExperimentSummary summarize(std::vector<RunRecord> runs, long t_limit, std::optional<double> optimum_tps) {
  if (runs.empty()) throw std::invalid_argument("experiment needs at least one run");
  ExperimentSummary s;
  s.n_runs = runs.size();
  s.t_limit = t_limit;
  s.optimum_tps = optimum_tps;
  s.t_min = runs.front().t_max;
  s.t_max = runs.front().t_max;
  double w_sum = 0.0, t_sum = 0.0;
  std::map<long long, std::size_t> bins;
  for (const RunRecord& r : runs) {
    s.w_max_max = std::max(s.w_max_max, r.w_max);
    w_sum += r.w_max;
    t_sum += static_cast<double>(r.t_max);
    s.t_min = std::min(s.t_min, r.t_max);
    s.t_max = std::max(s.t_max, r.t_max);
    if (optimum_tps && r.tps_max >= *optimum_tps - 1e-9) ++s.n_opt_found;
    s.n_stable += r.stable;
    ++bins[std::llround(r.w_max * 1e4)];
  }
  s.w_max_avrg = w_sum / static_cast<double>(runs.size());
  s.t_avrg = t_sum / static_cast<double>(runs.size());
  for (auto [key, count] : bins) s.wealth_histogram.emplace_back(static_cast<double>(key) / 1e4, count);
  s.runs = std::move(runs);
  return s;
}

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Calls fn(k) for k in [0, n_runs) on up to `jobs` threads. Results are stored
/// by index, so the output does not depend on scheduling.
template <typename Fn>
std::vector<RunRecord> run_indexed(std::size_t n_runs, unsigned jobs, Fn fn) {
  std::vector<RunRecord> out(n_runs);
  jobs = static_cast<unsigned>(std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, n_runs)));
  if (jobs == 1) {
    for (std::size_t k = 0; k < n_runs; ++k) out[k] = fn(k);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n_runs; k = next++) out[k] = fn(k);
    });
  for (auto& t : pool) t.join();
  return out;
}

/// Independent CA runs from random starts of side n (start == nullopt) or
/// from a fixed start pattern. Run k uses derive_seed(cfg.seed, k).
inline ExperimentSummary run_ca_experiment(const CaConfig& cfg, int n, std::size_t n_runs,
                                           std::optional<double> optimum_tps = std::nullopt,
                                           const std::optional<Pattern>& start = std::nullopt,
                                           unsigned jobs = 1) {
  if (n_runs == 0) throw std::invalid_argument("experiment needs at least one run");
  const CaEngine engine(cfg);
  auto runs = run_indexed(n_runs, jobs, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(cfg.seed, k);
    Rng rng(seed);
    CaState st = start ? engine.init(*start) : engine.init(n, rng);
    const RunResult r = engine.run(std::move(st), rng, {}, false);
    return RunRecord{seed, r.w_max, r.tps_max, r.t_max, r.stable, r.tps_final};
  });
  return summarize(std::move(runs), cfg.t_limit, optimum_tps);
}

/// Independent GA runs; t_max is the iteration where the final best appeared.
inline ExperimentSummary run_ga_experiment(const GaConfig& cfg, int n, std::size_t n_runs,
                                           std::optional<double> optimum_tps = std::nullopt, unsigned jobs = 1) {
  if (n_runs == 0) throw std::invalid_argument("experiment needs at least one run");
  auto runs = run_indexed(n_runs, jobs, [&](std::size_t k) {
    GaConfig run_cfg = cfg;
    run_cfg.seed = derive_seed(cfg.seed, k);
    const GaResult r = run_ga(run_cfg, n);
    const double best = r.population.front().fitness;
    return RunRecord{run_cfg.seed, wealth_from_tps(best, n, cfg.payoff), best, r.best_found_at, false, best};
  });
  return summarize(std::move(runs), cfg.max_iterations, optimum_tps);
}

}  // namespace spdca
