#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "spdca/grid.hpp"
#include "spdca/payoff.hpp"
#include "spdca/rng.hpp"
#include "spdca/templates.hpp"

namespace spdca {

enum class Selection { random, sequential };

struct CaConfig {
  TemplateSet templates = builtin_set(BuiltinRule::rule8);
  double pi01 = 0.04;  // noise 0 -> 1 when no template hits
  double pi10 = 1.0;   // noise 1 -> 0 when no template hits
  Selection selection = Selection::random;
  double init_density = 0.25;
  long t_limit = 100;
  std::uint64_t seed = 1;
  PayoffParams payoff;  // evaluation only

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(pi01) || !prob(pi10)) throw std::invalid_argument("noise probabilities must lie in [0, 1]");
    if (!prob(init_density)) throw std::invalid_argument("init density must lie in [0, 1]");
    if (t_limit < 0) throw std::invalid_argument("t_limit must be >= 0");
  }
};

/// Pattern states a, hit states h and the generation counter.
struct CaState {
  Pattern pattern;
  std::vector<Cell> hits;
  long t = 0;
  std::size_t cursor = 0;  // next cell under sequential selection

  explicit CaState(Pattern p)
      : pattern(std::move(p)), hits(pattern.cell_count(), 0) {}
};

/// Lookup from a cell's outer ring to the templates whose outer ring matches.
/// Built once per template set; equivalent to running match_except_center
/// against every template.
class RuleTable {
 public:
  explicit RuleTable(const TemplateSet& set) {
    std::array<std::vector<std::uint16_t>, 256> buckets;
    for (std::size_t q = 0; q < set.size(); ++q) buckets[set[q].outer()].push_back(static_cast<std::uint16_t>(q));
    centers_.reserve(set.size());
    for (const Template& t : set) centers_.push_back(t.center());

    for (std::size_t o = 0; o < 256; ++o) {
      offsets_[o] = static_cast<std::uint32_t>(indices_.size());
      indices_.insert(indices_.end(), buckets[o].begin(), buckets[o].end());
    }
    offsets_[256] = static_cast<std::uint32_t>(indices_.size());

    // A 9-bit neighborhood is settled when it has at least one outer match and
    // every outer match agrees with the current center.
    for (std::uint16_t code = 0; code < 512; ++code) {
      const auto hits = matches(outer_code(code));
      bool ok = !hits.empty();
      for (std::uint16_t q : hits) ok = ok && centers_[q] == (code & 1u);
      settled_[code] = ok;
    }
  }

  std::span<const std::uint16_t> matches(std::uint8_t outer) const noexcept {
    return std::span<const std::uint16_t>(indices_).subspan(offsets_[outer], offsets_[outer + 1u] - offsets_[outer]);
  }

  Cell center(std::uint16_t q) const noexcept { return centers_[q]; }
  bool settled(std::uint16_t code) const noexcept { return settled_[code]; }

  /// True if some outer ring is matched by templates with different centers.
  bool ambiguous() const noexcept {
    for (std::size_t o = 0; o < 256; ++o) {
      const auto hits = matches(static_cast<std::uint8_t>(o));
      for (std::uint16_t q : hits)
        if (centers_[q] != centers_[hits.front()]) return true;
    }
    return false;
  }

 private:
  std::vector<std::uint16_t> indices_;
  std::array<std::uint32_t, 257> offsets_{};
  std::vector<Cell> centers_;
  std::array<bool, 512> settled_{};
};

struct TracePoint {
  long t;
  double tps;
  double wealth;
  bool stable;
};

struct RunResult {
  double w_max = 0.0;
  double tps_max = 0.0;
  long t_max = 0;  // first generation at which w_max was seen
  bool stable = false;
  double tps_final = 0.0;
  double w_final = 0.0;
  std::optional<long> t_stable;  // first generation whose pattern was a fixed point
  Pattern final_pattern{Pattern::min_size};
  std::vector<TracePoint> trace;  // t = 0 .. t_limit
};

/// Probabilistic, asynchronously updated template CA.
class CaEngine {
 public:
  explicit CaEngine(CaConfig cfg) : cfg_(std::move(cfg)), table_(cfg_.templates) { cfg_.validate(); }

  const CaConfig& config() const noexcept { return cfg_; }
  const RuleTable& table() const noexcept { return table_; }

  CaState init(int n, Rng& rng) const {
    Pattern p(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p.set(i, j, rng.chance(cfg_.init_density) ? 1 : 0);
    return CaState(std::move(p));
  }

  CaState init(const Pattern& start) const { return CaState(start); }

  std::uint16_t code_at(const Pattern& p, Coord c) const noexcept {
    return neighborhood_code(moore_neighborhood(p, c));
  }

  /// Updates one cell: adjust toward a randomly chosen outer-matching
  /// template, or apply state noise when nothing matches.
  void micro_step(CaState& s, Rng& rng) const {
    const int n = s.pattern.size();
    const std::size_t cells = s.pattern.cell_count();
    std::size_t idx;
    if (cfg_.selection == Selection::random) {
      idx = static_cast<std::size_t>(rng.below(cells));
    } else {
      idx = s.cursor;
      s.cursor = (s.cursor + 1) % cells;
    }
    const Coord c{static_cast<int>(idx / static_cast<std::size_t>(n)), static_cast<int>(idx % static_cast<std::size_t>(n))};

    const auto hits = table_.matches(outer_code(code_at(s.pattern, c)));
    s.hits[idx] = hits.empty() ? 0 : 1;
    if (!hits.empty()) {
      const std::uint16_t q = hits.size() == 1 ? hits.front() : hits[static_cast<std::size_t>(rng.below(hits.size()))];
      s.pattern.set(c, table_.center(q));
    } else if (s.pattern.at(c) == 0) {
      if (rng.chance(cfg_.pi01)) s.pattern.set(c, 1);
    } else {
      if (rng.chance(cfg_.pi10)) s.pattern.set(c, 0);
    }
  }

  /// n^2 micro-steps, then t += 1.
  void generation(CaState& s, Rng& rng) const {
    const std::size_t cells = s.pattern.cell_count();
    for (std::size_t k = 0; k < cells; ++k) micro_step(s, rng);
    ++s.t;
  }

  /// Every cell matched, and no matching template would change it.
  bool is_stable(const Pattern& p) const {
    const int n = p.size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!table_.settled(code_at(p, {i, j}))) return false;
    return true;
  }

  using Observer = std::function<void(const CaState&)>;

  /// Runs generations 1..t_limit and evaluates wealth after each one (and at
  /// t = 0). A stable pattern can never change again, so the run stops
  /// simulating there and repeats the last evaluation in the trace.
  RunResult run(CaState s, Rng& rng, const Observer& observe = {}, bool record_trace = true) const {
    RunResult r;
    auto evaluate = [&](const CaState& st, bool stable) {
      const double total = tps(st.pattern, cfg_.payoff);
      const double w = wealth_from_tps(total, st.pattern.size(), cfg_.payoff);
      if (st.t == 0 || total > r.tps_max) {
        r.tps_max = total;
        r.w_max = w;
        r.t_max = st.t;
      }
      if (stable && !r.t_stable) r.t_stable = st.t;
      if (record_trace) r.trace.push_back({st.t, total, w, stable});
      r.tps_final = total;
      r.w_final = w;
      r.stable = stable;
    };

    bool stable = is_stable(s.pattern);
    evaluate(s, stable);
    if (observe) observe(s);
    while (s.t < cfg_.t_limit) {
      if (stable) {
        ++s.t;
        if (record_trace) r.trace.push_back({s.t, r.tps_final, r.w_final, true});
        if (observe) observe(s);
        continue;
      }
      generation(s, rng);
      stable = is_stable(s.pattern);
      evaluate(s, stable);
      if (observe) observe(s);
    }
    r.final_pattern = std::move(s.pattern);
    return r;
  }

  RunResult run(int n, const Observer& observe = {}, bool record_trace = true) const {
    Rng rng(cfg_.seed);
    return run(init(n, rng), rng, observe, record_trace);
  }

  RunResult run(const Pattern& start, const Observer& observe = {}, bool record_trace = true) const {
    Rng rng(cfg_.seed);
    return run(init(start), rng, observe, record_trace);
  }

 private:
  CaConfig cfg_;
  RuleTable table_;
};

}  // namespace spdca
