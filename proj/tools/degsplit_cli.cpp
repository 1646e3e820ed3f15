#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "degsplit/edge_color.hpp"
#include "degsplit/graph.hpp"
#include "degsplit/json_io.hpp"
#include "degsplit/local_sim.hpp"
#include "degsplit/oracles.hpp"
#include "degsplit/orient_directed.hpp"
#include "degsplit/sinkless.hpp"
#include "degsplit/split_undirected.hpp"

using namespace degsplit;

namespace {

json report_to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
  return json{{"ok", r.ok()}, {"checks", std::move(checks)}};
}

struct GenSpec {
  std::string family = "regular";
  NodeId n = 100;
  int delta = 3;
  int a = 2;
  double p = 0.1;
  std::uint64_t seed = 1;
};

Graph build_graph(const GenSpec& s) {
  if (s.family == "cycle") return make_cycle(s.n);
  if (s.family == "clique") return make_clique(s.n);
  if (s.family == "tree") return make_tree(s.n, s.seed);
  if (s.family == "forest_union") return make_forest_union(s.n, s.a, s.seed);
  if (s.family == "gnp") return make_gnp(s.n, s.p, s.seed);
  if (s.family == "regular") return make_regular(s.n, s.delta, s.seed);
  throw CLI::ValidationError("--family", "unknown family " + s.family);
}

void emit(const json& j, const std::string& out) {
  std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    f << text;
  }
}

struct RunOutcome {
  json artifact;
  ValidationReport report;
};

RunOutcome run_algo(const Graph& g, const std::string& algo, double eps, std::size_t x,
                    std::size_t a, const std::string& mode, std::uint64_t seed,
                    const SinklessConfig& scfg, const SplitConfig& pcfg,
                    const OrientConfig& ocfg, RunMetrics& rm) {
  RunOutcome r;
  const std::size_t delta = g.n() ? g.max_degree() : 0;
  if (algo == "sinkless") {
    // The dispatcher wants min degree >= 3; cycle-like inputs still have
    // sinkless orientations, reachable through the component solver.
    std::size_t mindeg = static_cast<std::size_t>(-1);
    for (NodeId v = 0; v < g.n(); ++v) mindeg = std::min(mindeg, g.degree(v));
    Orientation o = (g.n() && mindeg >= 3)
                        ? sinkless_dispatch(g, seed, scfg, &rm)
                        : detail_sinkless::solve_components(g, scfg, &rm);
    r.artifact = orientation_to_json(o);
    r.report = check_sinkless(g, o);
  } else if (algo == "split_low" || algo == "split_high" || algo == "split_random") {
    TwoColoring c;
    std::size_t t;
    if (algo == "split_low") {
      c = balanced_split_low(g, eps, pcfg, &rm);
      t = balance_floor(eps, delta);
    } else if (algo == "split_high") {
      c = balanced_split_high(g, eps, pcfg, &rm);
      t = balance_floor(eps, delta);
    } else {
      c = balanced_split_randomized(g, eps, seed, pcfg, &rm);
      t = balance_ceil(eps, delta);
    }
    r.artifact = two_coloring_to_json(c);
    r.report = check_balance(g, c, t);
  } else if (algo == "euler_split") {
    TwoColoring c = euler_split(g);
    r.artifact = two_coloring_to_json(c);
    r.report = check_balance(g, c, delta / 2 + 1);
  } else if (algo == "base_color" || algo == "coarse_color" || algo == "fine_color" ||
             algo == "randomized_color") {
    PaletteColoring pc;
    if (algo == "base_color")
      pc = base_color(g);
    else if (algo == "coarse_color")
      pc = coarse_color(g, x);
    else if (algo == "fine_color")
      pc = fine_color(g, eps, {}, &rm);
    else
      pc = randomized_color(g, eps, seed, {}, &rm);
    r.artifact = palette_to_json(pc);
    r.report = check_proper(g, pc);
  } else if (algo == "arboricity_orient") {
    OrientMode m = mode == "luby-rounds" ? OrientMode::LubyRounds : OrientMode::BlockingGreedy;
    std::vector<std::size_t> trace;
    Orientation o = arboricity_orient(g, a, eps, m, ocfg, &trace, &rm);
    std::size_t D = static_cast<std::size_t>(std::ceil((1.0 + eps) * static_cast<double>(a)));
    r.artifact = orientation_to_json(o);
    r.report = check_in_out_bounds(g, o, D, g.m());
    bool mono = true;
    for (std::size_t i = 0; i < trace.size(); ++i)
      if (trace[i] < 3 + i) mono = false;
    r.report.add("blocking_distance", mono);
  } else if (algo == "directed_split_det" || algo == "directed_split_random") {
    Orientation o;
    std::size_t D;
    if (algo == "directed_split_det") {
      o = directed_split_deterministic(g, eps, ocfg, &rm);
      D = static_cast<std::size_t>(std::floor((1.0 + eps) * static_cast<double>(delta) / 2.0));
    } else {
      o = directed_split_randomized(g, eps, ocfg, &rm);
      D = static_cast<std::size_t>(std::ceil((1.0 + eps) * static_cast<double>(delta) / 2.0));
    }
    r.artifact = orientation_to_json(o);
    r.report = check_in_out_bounds(g, o, D, D);
  } else if (algo == "forest_decompose") {
    Orientation o = arboricity_orient(g, a, eps, OrientMode::BlockingGreedy, ocfg, nullptr, &rm);
    ForestDecomposition fd = forest_decompose(g, o, a, eps, seed, ocfg);
    r.artifact = forests_to_json(fd);
    r.report = check_forests(g, fd);
    double cap = static_cast<double>(a) * (1.0 + 8.0 * eps);
    r.report.add("forest_count", static_cast<double>(fd.forests) <= cap,
                 std::to_string(fd.forests) + " forests");
  } else {
    throw CLI::ValidationError("--algo", "unknown algorithm " + algo);
  }
  return r;
}

ValidationReport verify_artifact(const Graph& g, const json& art, const std::string& contract,
                                 std::size_t t, std::size_t din, std::size_t dout) {
  if (contract == "sinkless") return check_sinkless(g, orientation_from_json(art, g));
  if (contract == "proper") return check_proper(g, palette_from_json(art, g));
  if (contract == "balance") return check_balance(g, two_coloring_from_json(art, g), t);
  if (contract == "in_out_bounds")
    return check_in_out_bounds(g, orientation_from_json(art, g), dout, din);
  if (contract == "forests") return check_forests(g, forests_from_json(art, g));
  throw CLI::ValidationError("--contract", "unknown contract " + contract);
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  auto dots = spec.find("..");
  if (dots == std::string::npos) {
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) seeds.push_back(std::stoull(tok));
  } else {
    std::uint64_t lo = std::stoull(spec.substr(0, dots));
    std::uint64_t hi = std::stoull(spec.substr(dots + 2));
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degree splitting, edge coloring, and orientation toolkit"};
  app.require_subcommand(1);

  GenSpec gen;
  std::string graph_file, out, algo = "sinkless", mode = "blocking-greedy";
  std::string contract = "sinkless", artifact_file, seeds_spec = "1";
  double eps = 0.5;
  std::size_t x = 2, t_bound = 0, din = 0, dout = 0;
  SinklessConfig scfg;
  SplitConfig pcfg;
  OrientConfig ocfg;

  auto add_family = [&](CLI::App* cmd) {
    cmd->add_option("--family", gen.family, "cycle|clique|tree|forest_union|gnp|regular");
    cmd->add_option("--n", gen.n, "node count");
    cmd->add_option("--delta", gen.delta, "degree for regular graphs");
    cmd->add_option("--a", gen.a, "forest count for forest_union");
    cmd->add_option("--p", gen.p, "edge probability for gnp");
  };
  auto add_constants = [&](CLI::App* cmd) {
    cmd->add_option("--high-threshold", scfg.high_threshold, "degree cutoff for shattering");
    cmd->add_option("--fast-c1", scfg.fast_c1, "random-orientation fast-path multiplier");
    cmd->add_option("--cycle-budget", scfg.cycle_enum_budget, "short-cycle enumeration budget");
    cmd->add_option("--improve-cap", pcfg.improve_cap_factor, "augmentation iteration cap factor");
    cmd->add_option("--cl", ocfg.cl, "path-length cap multiplier");
    cmd->add_option("--forest-c2", ocfg.forest_c2, "forest decomposition threshold constant");
  };

  auto* g_cmd = app.add_subcommand("generate", "emit a graph as JSON");
  add_family(g_cmd);
  g_cmd->add_option("--seed", gen.seed, "generator seed");
  g_cmd->add_option("--out", out, "output file (default stdout)");

  auto* r_cmd = app.add_subcommand("run", "run an algorithm and verify its output");
  add_family(r_cmd);
  add_constants(r_cmd);
  r_cmd->add_option("--graph", graph_file, "read the graph from a JSON file instead");
  r_cmd->add_option("--algo", algo, "algorithm id");
  r_cmd->add_option("--eps", eps, "accuracy parameter");
  r_cmd->add_option("--x", x, "coarse coloring degree parameter");
  r_cmd->add_option("--mode", mode, "blocking-greedy|luby-rounds");
  r_cmd->add_option("--seed", gen.seed, "run seed");
  r_cmd->add_option("--max-rounds", t_bound, "unused budget hook");
  r_cmd->add_option("--out", out, "output file (default stdout)");

  auto* v_cmd = app.add_subcommand("verify", "check an artifact against a contract");
  v_cmd->add_option("--graph", graph_file, "graph JSON file")->required();
  v_cmd->add_option("--artifact", artifact_file, "artifact JSON file")->required();
  v_cmd->add_option("--contract", contract, "sinkless|proper|balance|in_out_bounds|forests");
  v_cmd->add_option("--t", t_bound, "balance threshold");
  v_cmd->add_option("--din", din, "in-degree bound");
  v_cmd->add_option("--dout", dout, "out-degree bound");

  auto* b_cmd = app.add_subcommand("bench", "sweep seeds and emit JSON-lines rows");
  add_family(b_cmd);
  add_constants(b_cmd);
  b_cmd->add_option("--algo", algo, "algorithm id");
  b_cmd->add_option("--eps", eps, "accuracy parameter");
  b_cmd->add_option("--x", x, "coarse coloring degree parameter");
  b_cmd->add_option("--mode", mode, "blocking-greedy|luby-rounds");
  b_cmd->add_option("--seeds", seeds_spec, "seed list: 1..20 or 1,5,9");
  b_cmd->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (g_cmd->parsed()) {
      emit(graph_to_json(build_graph(gen)), out);
      return 0;
    }
    if (r_cmd->parsed()) {
      Graph g = graph_file.empty()
                    ? build_graph(gen)
                    : graph_from_json(json::parse(std::ifstream(graph_file)));
      RunMetrics rm;
      RunOutcome res = run_algo(g, algo, eps, x, static_cast<std::size_t>(gen.a), mode,
                                gen.seed, scfg, pcfg, ocfg, rm);
      emit(json{{"algorithm", algo},
                {"seed", gen.seed},
                {"artifact", std::move(res.artifact)},
                {"metrics", rm.to_json()},
                {"validation", report_to_json(res.report)}},
           out);
      if (!res.report.ok()) {
        std::cerr << res.report.summary();
        return 1;
      }
      return 0;
    }
    if (v_cmd->parsed()) {
      Graph g = graph_from_json(json::parse(std::ifstream(graph_file)));
      json art = json::parse(std::ifstream(artifact_file));
      ValidationReport rep = verify_artifact(g, art, contract, t_bound, din, dout);
      std::cout << report_to_json(rep).dump(2) << "\n";
      if (!rep.ok()) {
        std::cerr << rep.summary();
        return 1;
      }
      return 0;
    }
    // bench
    std::ostringstream rows;
    bool all_ok = true;
    for (std::uint64_t s : parse_seeds(seeds_spec)) {
      GenSpec gs = gen;
      gs.seed = s;
      Graph g = build_graph(gs);
      RunMetrics rm;
      RunOutcome res =
          run_algo(g, algo, eps, x, static_cast<std::size_t>(gen.a), mode, s, scfg, pcfg,
                   ocfg, rm);
      bool pass = res.report.ok();
      all_ok = all_ok && pass;
      rows << json{{"n", gen.n},
                   {"delta", gen.delta},
                   {"a", gen.a},
                   {"eps", eps},
                   {"algorithm", algo},
                   {"seed", s},
                   {"rounds", rm.rounds},
                   {"pass", pass}}
                  .dump()
           << "\n";
    }
    if (out.empty()) {
      std::cout << rows.str();
    } else {
      std::ofstream f(out, std::ios::binary);
      f << rows.str();
    }
    return all_ok ? 0 : 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
