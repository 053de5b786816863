// spdca: command-line front end for the pattern pipeline.
//
//   ga -> extract -> evolve -> analyze, plus construct / oracle / bench /
//   expected-wealth / render / payoff-map and a `pipeline` driver.
//
// Patterns and templates are plain text, summaries JSON, series CSV. Every
// command that writes files also writes <command>_manifest.json next to them.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "spdca/spdca.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace spdca;

namespace {

/// Error raised by one pipeline stage; reported as {"error", "stage"}.
struct StageError : std::runtime_error {
  StageError(std::string stage, const std::string& what) : std::runtime_error(what), stage(std::move(stage)) {}
  std::string stage;
};

struct Globals {
  std::uint64_t seed = 1;
  unsigned jobs = default_jobs();
  std::string out_dir = ".";
  bool out_dir_given = false;
};

struct PayoffFlags {
  double T = 3.0, R = 1.0, P = 0.0, S = 0.0;
  bool no_self_play = false;

  PayoffParams params() const { return {T, R, P, S, !no_self_play}; }
  ordered_json json() const { return {{"T", T}, {"R", R}, {"P", P}, {"S", S}, {"self_play", !no_self_play}}; }
};

void add_payoff_flags(CLI::App* cmd, PayoffFlags& f) {
  cmd->add_option("--T", f.T, "Temptation payoff")->capture_default_str();
  cmd->add_option("--R", f.R, "Reward payoff")->capture_default_str();
  cmd->add_option("--P", f.P, "Punishment payoff")->capture_default_str();
  cmd->add_option("--S", f.S, "Sucker payoff")->capture_default_str();
  cmd->add_flag("--no-self-play", f.no_self_play, "Play the 8 outer neighbors only (K = 8)");
}

std::string read_text(const std::string& path, const std::string& stage) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw StageError(stage, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content, const std::string& stage) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw StageError(stage, "cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) throw StageError(stage, "failed writing '" + path.string() + "'");
}

Pattern load_pattern(const std::string& path, const std::string& stage) {
  const std::string text = read_text(path, stage);
  try {
    return parse_pattern(text);
  } catch (const ParseError& e) {
    throw StageError(stage, path + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const Globals& g, const fs::path& dir, const std::string& command, ordered_json params) {
  ordered_json m;
  m["subcommand"] = command;
  m["parameters"] = std::move(params);
  m["seed"] = g.seed;
  m["tool_version"] = kVersion;
  m["timestamp"] = utc_timestamp();
  write_text(dir / (command + "_manifest.json"), m.dump(2) + "\n", command);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

TemplateSet rule_templates(int rule, const std::string& stage) {
  switch (rule) {
    case 8: return builtin_set(BuiltinRule::rule8);
    case 36: return builtin_set(BuiltinRule::rule36);
    case 52: return builtin_set(BuiltinRule::rule52);
    default: throw StageError(stage, "unknown rule " + std::to_string(rule) + " (expected 8, 36 or 52)");
  }
}

ordered_json structure_json(const StructureReport& s) {
  return {{"points", s.points},
          {"dominoes", s.dominoes},
          {"singularities", s.singularities},
          {"ones", s.ones},
          {"zero_cells", s.zero_cells}};
}

ordered_json characteristic_json(const Characteristic& cc) {
  return {{"wealth", cc.wealth}, {"tps", cc.tps},   {"n", cc.n},
          {"n2", cc.cells},      {"b", cc.ones},    {"density", cc.density}};
}

ordered_json analyze_json(const Pattern& p, const PayoffParams& params) {
  ordered_json j;
  j["structure"] = structure_json(analyze_structure(p));
  j["characteristic"] = characteristic_json(characteristic(p, params));
  ordered_json sing = ordered_json::array();
  for (Coord c : detect_singularities(p)) sing.push_back({c.i, c.j});
  j["singularity_blocks"] = std::move(sing);
  return j;
}

ordered_json summary_json(const ExperimentSummary& s) {
  ordered_json j;
  j["n_runs"] = s.n_runs;
  j["t_limit"] = s.t_limit;
  j["w_max_max"] = s.w_max_max;
  j["w_max_avrg"] = s.w_max_avrg;
  j["t_avrg"] = s.t_avrg;
  j["t_min"] = s.t_min;
  j["t_max"] = s.t_max;
  if (s.optimum_tps) j["optimum_tps"] = *s.optimum_tps;
  j["n_opt_found"] = s.n_opt_found;
  j["n_stable"] = s.n_stable;
  ordered_json hist = ordered_json::array();
  for (auto [w, count] : s.wealth_histogram) hist.push_back({{"wealth", w}, {"count", count}});
  j["wealth_histogram"] = std::move(hist);
  ordered_json runs = ordered_json::array();
  for (const RunRecord& r : s.runs)
    runs.push_back({{"seed", r.seed}, {"w_max", r.w_max}, {"tps_max", r.tps_max},
                    {"t_max", r.t_max}, {"stable", r.stable}, {"tps_final", r.tps_final}});
  j["runs"] = std::move(runs);
  return j;
}

std::string histogram_csv(const ExperimentSummary& s) {
  std::string out = "wealth,count\n";
  char buf[64];
  for (auto [w, count] : s.wealth_histogram) {
    std::snprintf(buf, sizeof buf, "%.4f,%zu\n", w, count);
    out += buf;
  }
  return out;
}

std::string trace_csv(const RunResult& r) {
  std::string out = "t,tps,wealth,stable\n";
  char buf[96];
  for (const TracePoint& tp : r.trace) {
    std::snprintf(buf, sizeof buf, "%ld,%s,%.6f,%d\n", tp.t, format_number(tp.tps).c_str(), tp.wealth,
                  tp.stable ? 1 : 0);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage implementations shared by the subcommands and `pipeline`.

struct GaOptions {
  int n = 6;
  int pop = 40;
  double p1 = 0.2, p2 = 0.05;
  long iters = 10000;
  std::optional<double> target;
  int keep = 5;
  PayoffFlags payoff;
};

ordered_json ga_params(const GaOptions& o) {
  ordered_json j{{"n", o.n}, {"pop", o.pop}, {"p1", o.p1}, {"p2", o.p2}, {"iters", o.iters}, {"keep", o.keep}};
  j["target"] = o.target ? ordered_json(*o.target) : ordered_json(nullptr);
  j["payoff"] = o.payoff.json();
  return j;
}

GaResult stage_ga(const Globals& g, const GaOptions& o, const fs::path& dir, const std::string& prefix) {
  GaConfig cfg;
  cfg.population_size = o.pop;
  cfg.p1 = o.p1;
  cfg.p2 = o.p2;
  cfg.max_iterations = o.iters;
  cfg.target_fitness = o.target;
  cfg.seed = g.seed;
  cfg.payoff = o.payoff.params();
  GaResult r;
  try {
    r = run_ga(cfg, o.n);
  } catch (const std::exception& e) {
    throw StageError("ga", e.what());
  }
  const int keep = std::min<int>(o.keep, static_cast<int>(r.population.size()));
  for (int k = 0; k < keep; ++k)
    write_text(dir / (prefix + "best_" + std::to_string(k) + ".txt"),
               serialize_pattern(r.population[static_cast<std::size_t>(k)].pattern), "ga");
  const double best = r.population.front().fitness;
  ordered_json summary{{"best_tps", best},
                       {"best_wealth", wealth_from_tps(best, o.n, cfg.payoff)},
                       {"iterations_used", r.iterations_used},
                       {"best_found_at", r.best_found_at},
                       {"seed", g.seed}};
  write_text(dir / (prefix + "summary.json"), dump(summary), "ga");
  return r;
}

struct EvolveOptions {
  int rule = 8;
  std::string templates_file;
  int n = 6;
  long tlimit = 100;
  std::string init_file;
  double init_density = 0.25;
  bool point_filled_start = false;
  std::string select = "random";
  double pi01 = 0.04, pi10 = 1.0;
  long dump_every = 0;
  PayoffFlags payoff;
};

ordered_json evolve_params(const EvolveOptions& o) {
  ordered_json j{{"rule", o.templates_file.empty() ? ordered_json(o.rule) : ordered_json(nullptr)},
                 {"templates", o.templates_file},
                 {"n", o.n},
                 {"tlimit", o.tlimit},
                 {"init", o.init_file},
                 {"init_density", o.init_density},
                 {"point_filled", o.point_filled_start},
                 {"select", o.select},
                 {"pi01", o.pi01},
                 {"pi10", o.pi10},
                 {"dump_every", o.dump_every}};
  j["payoff"] = o.payoff.json();
  return j;
}

CaConfig make_ca_config(const Globals& g, const EvolveOptions& o, std::optional<TemplateSet> templates) {
  CaConfig cfg;
  if (templates) {
    cfg.templates = std::move(*templates);
  } else if (!o.templates_file.empty()) {
    try {
      cfg.templates = parse_templates(read_text(o.templates_file, "evolve"));
    } catch (const ParseError& e) {
      throw StageError("evolve", o.templates_file + ": " + e.what());
    }
  } else {
    cfg.templates = rule_templates(o.rule, "evolve");
  }
  cfg.pi01 = o.pi01;
  cfg.pi10 = o.pi10;
  if (o.select == "random") cfg.selection = Selection::random;
  else if (o.select == "sequential") cfg.selection = Selection::sequential;
  else throw StageError("evolve", "unknown selection '" + o.select + "'");
  cfg.init_density = o.init_density;
  cfg.t_limit = o.tlimit;
  cfg.seed = g.seed;
  cfg.payoff = o.payoff.params();
  return cfg;
}

std::optional<Pattern> start_pattern(const EvolveOptions& o, const std::string& stage) {
  if (!o.init_file.empty()) return load_pattern(o.init_file, stage);
  if (o.point_filled_start) return point_filled(o.n);
  return std::nullopt;
}

RunResult stage_evolve(const Globals& g, const EvolveOptions& o, std::optional<TemplateSet> templates,
                       std::optional<Pattern> start, const fs::path& dir, const std::string& prefix) {
  CaConfig cfg = make_ca_config(g, o, std::move(templates));
  std::optional<CaEngine> engine;
  try {
    engine.emplace(cfg);
  } catch (const std::exception& e) {
    throw StageError("evolve", e.what());
  }
  CaEngine::Observer observe;
  if (o.dump_every > 0)
    observe = [&](const CaState& s) {
      if (s.t % o.dump_every != 0) return;
      char name[48];
      std::snprintf(name, sizeof name, "gen_%06ld.txt", s.t);
      write_text(dir / (prefix + name), serialize_pattern(s.pattern), "evolve");
    };
  RunResult r;
  try {
    r = start ? engine->run(*start, observe) : engine->run(o.n, observe);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("evolve", e.what());
  }
  write_text(dir / (prefix + "final.txt"), serialize_pattern(r.final_pattern), "evolve");
  write_text(dir / (prefix + "trace.csv"), trace_csv(r), "evolve");
  ordered_json summary{{"w_max", r.w_max},
                       {"t_max", r.t_max},
                       {"tps_max", r.tps_max},
                       {"stable", r.stable},
                       {"tps_final", r.tps_final},
                       {"w_final", r.w_final}};
  summary["t_stable"] = r.t_stable ? ordered_json(*r.t_stable) : ordered_json(nullptr);
  write_text(dir / (prefix + "summary.json"), dump(summary), "evolve");
  return r;
}

ordered_json extract_summary(const TemplateSet& set, bool complete) {
  ordered_json labels = ordered_json::array();
  for (const Template& t : set) labels.push_back(t.label);
  return {{"count", set.size()},
          {"complete", complete},
          {"symmetry_closed", is_symmetry_closed(set)},
          {"within_rule52", builtin_set(BuiltinRule::rule52).includes(set)},
          {"labels", std::move(labels)}};
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"Wealth-optimal binary patterns: spatial PD utility, GA, template extraction, template CA"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--seed", g.seed, "Base 64-bit seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads for bench/oracle")->capture_default_str();
  app.add_option_function<std::string>(
      "--out-dir", [&](const std::string& d) { g.out_dir = d, g.out_dir_given = true; }, "Output directory");

  // ga
  GaOptions ga;
  auto* ga_cmd = app.add_subcommand("ga", "Evolve optimal master patterns with the genetic algorithm");
  ga_cmd->add_option("--n", ga.n, "Pattern side")->required();
  ga_cmd->add_option("--pop", ga.pop, "Population size M")->capture_default_str();
  ga_cmd->add_option("--p1", ga.p1, "Crossover take-from-mate probability")->capture_default_str();
  ga_cmd->add_option("--p2", ga.p2, "Per-bit mutation probability")->capture_default_str();
  ga_cmd->add_option("--iters", ga.iters, "Iteration limit")->capture_default_str();
  ga_cmd->add_option("--target", ga.target, "Stop once this TPS is reached");
  ga_cmd->add_option("--keep", ga.keep, "Number of best patterns written")->capture_default_str();
  add_payoff_flags(ga_cmd, ga.payoff);
  ga_cmd->callback([&] {
    const fs::path dir = g.out_dir;
    stage_ga(g, ga, dir, "ga_");
    write_manifest(g, dir, "ga", ga_params(ga));
    std::cout << read_text((dir / "ga_summary.json").string(), "ga");
  });

  // evolve
  EvolveOptions ev;
  auto add_evolve_flags = [](CLI::App* cmd, EvolveOptions& o) {
    cmd->add_option("--rule", o.rule, "Built-in rule: 8, 36 or 52")->capture_default_str();
    cmd->add_option("--tlimit", o.tlimit, "Generation limit")->capture_default_str();
    cmd->add_option("--init-density", o.init_density, "Probability a start cell is 1")->capture_default_str();
    cmd->add_flag("--point-filled", o.point_filled_start, "Start from the point-filled pattern");
    cmd->add_option("--select", o.select, "Cell selection: random or sequential")->capture_default_str();
    cmd->add_option("--pi01", o.pi01, "Noise probability 0 -> 1")->capture_default_str();
    cmd->add_option("--pi10", o.pi10, "Noise probability 1 -> 0")->capture_default_str();
  };
  auto* ev_cmd = app.add_subcommand("evolve", "Run the probabilistic template CA");
  add_evolve_flags(ev_cmd, ev);
  ev_cmd->add_option("--n", ev.n, "Pattern side (ignored with --init)")->capture_default_str();
  ev_cmd->add_option("--templates", ev.templates_file, "Template file instead of a built-in rule");
  ev_cmd->add_option("--init", ev.init_file, "Start pattern file");
  ev_cmd->add_option("--dump-every", ev.dump_every, "Write the pattern every k generations")->capture_default_str();
  add_payoff_flags(ev_cmd, ev.payoff);
  ev_cmd->callback([&] {
    const fs::path dir = g.out_dir;
    auto start = start_pattern(ev, "evolve");
    stage_evolve(g, ev, std::nullopt, std::move(start), dir, "evolve_");
    write_manifest(g, dir, "evolve", evolve_params(ev));
    std::cout << read_text((dir / "evolve_summary.json").string(), "evolve");
  });

  // extract
  std::string ex_in, ex_out;
  bool ex_no_complete = false;
  auto* ex_cmd = app.add_subcommand("extract", "Extract 3x3 templates from a master pattern");
  ex_cmd->add_option("--in", ex_in, "Pattern file")->required();
  ex_cmd->add_option("--out", ex_out, "Template file")->required();
  ex_cmd->add_flag("--no-complete", ex_no_complete, "Skip symmetry completion");
  ex_cmd->callback([&] {
    const TemplateSet set = extract_templates(load_pattern(ex_in, "extract"), !ex_no_complete);
    write_text(ex_out, serialize_templates(set), "extract");
    const fs::path out_path(ex_out);
    write_manifest(g, out_path.has_parent_path() ? out_path.parent_path() : fs::path("."), "extract",
                   {{"in", ex_in}, {"out", ex_out}, {"complete", !ex_no_complete}});
    std::cout << dump(extract_summary(set, !ex_no_complete));
  });

  // analyze
  std::string an_in;
  PayoffFlags an_payoff;
  auto* an_cmd = app.add_subcommand("analyze", "Structure report and characteristic of a pattern");
  an_cmd->add_option("--in", an_in, "Pattern file")->required();
  add_payoff_flags(an_cmd, an_payoff);
  an_cmd->callback([&] {
    const ordered_json j = analyze_json(load_pattern(an_in, "analyze"), an_payoff.params());
    std::cout << dump(j);
    if (g.out_dir_given) write_manifest(g, g.out_dir, "analyze", {{"in", an_in}, {"payoff", an_payoff.json()}});
  });

  // construct
  int co_n = 5;
  std::string co_out;
  auto* co_cmd = app.add_subcommand("construct", "Build the optimal pattern for odd n >= 5");
  co_cmd->add_option("--n", co_n, "Odd pattern side >= 5")->required();
  co_cmd->add_option("--out", co_out, "Write the pattern here instead of stdout");
  co_cmd->callback([&] {
    Pattern p(Pattern::min_size);
    try {
      p = construct_optimal_odd(co_n);
    } catch (const std::exception& e) {
      throw StageError("construct", e.what());
    }
    if (co_out.empty()) std::cout << serialize_pattern(p);
    else write_text(co_out, serialize_pattern(p), "construct");
    if (g.out_dir_given) write_manifest(g, g.out_dir, "construct", {{"n", co_n}, {"out", co_out}});
  });

  // oracle
  int or_n = 4;
  bool or_allow5 = false;
  PayoffFlags or_payoff;
  auto* or_cmd = app.add_subcommand("oracle", "Exhaustive maximum TPS for n <= 4 (n = 5 with --allow-5)");
  or_cmd->add_option("--n", or_n, "Pattern side")->required();
  or_cmd->add_flag("--allow-5", or_allow5, "Permit the 2^25 enumeration for n = 5");
  add_payoff_flags(or_cmd, or_payoff);
  or_cmd->callback([&] {
    OracleResult r;
    try {
      r = brute_force_oracle(or_n, or_payoff.params(), or_allow5, g.jobs);
    } catch (const std::exception& e) {
      throw StageError("oracle", e.what());
    }
    ordered_json reps = ordered_json::array();
    for (const Pattern& p : r.representatives) reps.push_back(serialize_pattern(p));
    ordered_json j{{"n", r.n},
                   {"max_tps", r.max_tps},
                   {"max_wealth", wealth_from_tps(r.max_tps, r.n, or_payoff.params())},
                   {"n_optima", r.n_optima},
                   {"n_classes", r.representatives.size()},
                   {"representatives_complete", r.representatives_complete},
                   {"representatives", std::move(reps)}};
    std::cout << dump(j);
    if (g.out_dir_given)
      write_manifest(g, g.out_dir, "oracle", {{"n", or_n}, {"allow_5", or_allow5}, {"payoff", or_payoff.json()}});
  });

  // bench
  EvolveOptions be;
  std::string be_kind = "ca";
  int be_n = 6;
  std::size_t be_runs = 100;
  std::optional<double> be_optimum;
  GaOptions be_ga;
  auto* be_cmd = app.add_subcommand("bench", "Repeated independent runs with summary statistics");
  add_evolve_flags(be_cmd, be);
  be_cmd->add_option("--kind", be_kind, "ca or ga")->capture_default_str();
  be_cmd->add_option("--n", be_n, "Pattern side")->capture_default_str();
  be_cmd->add_option("--runs", be_runs, "Number of runs")->capture_default_str();
  be_cmd->add_option("--init", be.init_file, "Start pattern file for every run");
  be_cmd->add_option("--optimum", be_optimum, "TPS counted as optimal (default: best known for n)");
  be_cmd->add_option("--iters", be_ga.iters, "GA iteration limit (kind ga)")->capture_default_str();
  be_cmd->add_option("--pop", be_ga.pop, "GA population size (kind ga)")->capture_default_str();
  add_payoff_flags(be_cmd, be.payoff);
  be_cmd->callback([&] {
    const fs::path dir = g.out_dir;
    be.n = be_n;
    const double optimum = be_optimum ? *be_optimum : known_optimum_tps(be_n);
    ExperimentSummary s;
    ordered_json params;
    try {
      if (be_kind == "ca") {
        const CaConfig cfg = make_ca_config(g, be, std::nullopt);
        s = run_ca_experiment(cfg, be_n, be_runs, optimum, start_pattern(be, "bench"), g.jobs);
        params = evolve_params(be);
      } else if (be_kind == "ga") {
        GaConfig cfg;
        cfg.population_size = be_ga.pop;
        cfg.max_iterations = be_ga.iters;
        cfg.target_fitness = optimum;
        cfg.seed = g.seed;
        cfg.payoff = be.payoff.params();
        s = run_ga_experiment(cfg, be_n, be_runs, optimum, g.jobs);
        params = {{"iters", be_ga.iters}, {"pop", be_ga.pop}, {"payoff", be.payoff.json()}};
      } else {
        throw StageError("bench", "unknown kind '" + be_kind + "' (expected ca or ga)");
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError("bench", e.what());
    }
    params["kind"] = be_kind;
    params["n"] = be_n;
    params["runs"] = be_runs;
    params["optimum"] = optimum;
    const ordered_json j = summary_json(s);
    write_text(dir / "bench_summary.json", dump(j), "bench");
    write_text(dir / "bench_histogram.csv", histogram_csv(s), "bench");
    write_manifest(g, dir, "bench", params);
    std::cout << dump(j);
  });

  // expected-wealth
  double xw_step = 0.01;
  PayoffFlags xw_payoff;
  auto* xw_cmd = app.add_subcommand("expected-wealth", "Mean-field wealth curve as CSV");
  xw_cmd->add_option("--step", xw_step, "Step in pi_C")->capture_default_str();
  add_payoff_flags(xw_cmd, xw_payoff);
  xw_cmd->callback([&] {
    if (!(xw_step > 0.0 && xw_step <= 1.0)) throw StageError("expected-wealth", "--step must lie in (0, 1]");
    const long steps = std::lround(1.0 / xw_step);
    std::string out = "pi_C,W\n";
    char buf[64];
    for (long k = 0; k <= steps; ++k) {
      const double pi = std::min(1.0, static_cast<double>(k) * xw_step);
      std::snprintf(buf, sizeof buf, "%.6g,%.10g\n", pi, expected_wealth(pi, xw_payoff.params()));
      out += buf;
    }
    std::cout << out;
    if (g.out_dir_given)
      write_manifest(g, g.out_dir, "expected-wealth", {{"step", xw_step}, {"payoff", xw_payoff.json()}});
  });

  // render
  std::string rd_in, rd_out;
  RenderOptions rd_opt;
  auto* rd_cmd = app.add_subcommand("render", "Write a pattern as a binary PPM image");
  rd_cmd->add_option("--in", rd_in, "Pattern file")->required();
  rd_cmd->add_option("--out", rd_out, "PPM file")->required();
  rd_cmd->add_option("--scale", rd_opt.scale, "Pixels per cell")->capture_default_str();
  rd_cmd->add_flag("--quad", rd_opt.quad, "Tile the pattern 2x2");
  rd_cmd->add_flag("--mark-singularities", rd_opt.mark_singularities, "Paint singularity blocks red");
  rd_cmd->callback([&] {
    const Image img = render(load_pattern(rd_in, "render"), rd_opt);
    try {
      write_ppm(rd_out, img);
    } catch (const std::exception& e) {
      throw StageError("render", e.what());
    }
    const fs::path out_path(rd_out);
    write_manifest(g, out_path.has_parent_path() ? out_path.parent_path() : fs::path("."), "render",
                   {{"in", rd_in}, {"out", rd_out}, {"scale", rd_opt.scale}, {"quad", rd_opt.quad},
                    {"mark_singularities", rd_opt.mark_singularities}});
  });

  // payoff-map
  std::string pm_in;
  PayoffFlags pm_payoff;
  auto* pm_cmd = app.add_subcommand("payoff-map", "Per-cell total payoffs as a CSV grid");
  pm_cmd->add_option("--in", pm_in, "Pattern file")->required();
  add_payoff_flags(pm_cmd, pm_payoff);
  pm_cmd->callback([&] {
    std::cout << payoff_map_csv(load_pattern(pm_in, "payoff-map"), pm_payoff.params());
    if (g.out_dir_given) write_manifest(g, g.out_dir, "payoff-map", {{"in", pm_in}, {"payoff", pm_payoff.json()}});
  });

  // pipeline
  GaOptions pl_ga;
  EvolveOptions pl_ev;
  pl_ev.n = 0;
  std::string pl_rule_from = "extracted", pl_master;
  auto* pl_cmd = app.add_subcommand("pipeline", "ga -> extract -> evolve -> analyze on one size");
  pl_cmd->add_option("--n", pl_ga.n, "Pattern side")->required();
  pl_cmd->add_option("--iters", pl_ga.iters, "GA iteration limit")->capture_default_str();
  pl_cmd->add_option("--target", pl_ga.target, "GA early-stop TPS");
  pl_cmd->add_option("--master", pl_master, "Use this master pattern instead of running the GA");
  pl_cmd->add_option("--rule-from", pl_rule_from, "extracted, 8, 36 or 52")->capture_default_str();
  pl_cmd->add_option("--evolve-n", pl_ev.n, "CA pattern side (default: --n)");
  add_evolve_flags(pl_cmd, pl_ev);
  pl_cmd->callback([&] {
    const fs::path dir = fs::path(g.out_dir);
    ordered_json summary;

    Pattern master(Pattern::min_size);
    if (pl_master.empty()) {
      pl_ga.keep = 1;
      const GaResult gr = stage_ga(g, pl_ga, dir, "ga_");
      master = gr.population.front().pattern;
      summary["ga"] = {{"best_tps", gr.population.front().fitness}, {"iterations_used", gr.iterations_used}};
    } else {
      master = load_pattern(pl_master, "ga");
      write_text(dir / "ga_best_0.txt", serialize_pattern(master), "ga");
      summary["ga"] = {{"master", pl_master}, {"best_tps", tps(master)}};
    }

    const TemplateSet extracted = extract_templates(master, true);
    write_text(dir / "templates.txt", serialize_templates(extracted), "extract");
    summary["extract"] = extract_summary(extracted, true);

    std::optional<TemplateSet> rule;
    if (pl_rule_from == "extracted") {
      rule = extracted;
    } else {
      try {
        rule = rule_templates(std::stoi(pl_rule_from), "evolve");
      } catch (const std::invalid_argument&) {
        throw StageError("evolve", "unknown --rule-from '" + pl_rule_from + "'");
      }
    }
    if (pl_ev.n == 0) pl_ev.n = pl_ga.n;
    const RunResult rr = stage_evolve(g, pl_ev, rule, start_pattern(pl_ev, "evolve"), dir, "evolve_");
    summary["evolve"] = {{"w_max", rr.w_max}, {"tps_max", rr.tps_max}, {"t_max", rr.t_max},
                         {"stable", rr.stable}, {"tps_final", rr.tps_final}};

    const ordered_json an = analyze_json(rr.final_pattern, PayoffParams{});
    write_text(dir / "analyze.json", dump(an), "analyze");
    summary["analyze"] = an;
    write_text(dir / "pipeline_summary.json", dump(summary), "pipeline");

    ordered_json params = ga_params(pl_ga);
    params["master"] = pl_master;
    params["rule_from"] = pl_rule_from;
    params["evolve"] = evolve_params(pl_ev);
    write_manifest(g, dir, "pipeline", params);
    std::cout << dump(summary);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const StageError& e) {
    std::cerr << ordered_json{{"error", e.what()}, {"stage", e.stage}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << ordered_json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
