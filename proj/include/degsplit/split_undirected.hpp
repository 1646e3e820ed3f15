#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "degsplit/assignments.hpp"
#include "degsplit/errors.hpp"
#include "degsplit/graph.hpp"
#include "degsplit/local_sim.hpp"
#include "degsplit/oracles.hpp"
#include "degsplit/rng.hpp"

namespace degsplit {

struct SplitConfig {
  /// Iteration cap factor for improve_balance: cap = improve_cap_factor *
  /// d * ceil(log2 n + 1). 0 means unlimited.
  std::size_t improve_cap_factor = 10;
  /// Path-length constant for the randomized search: l = ceil(c_l ln n / eps).
  double c_l = 3.0;
  /// Candidate-path enumeration budget for the luby-supergraph mode.
  std::size_t luby_budget = 200000;
  /// Node cap for the luby-supergraph mode.
  std::size_t luby_node_cap = 60;
};

enum class NodeLabel : std::uint8_t { None, RedL, BlueL };

/// A node is labeled a color when it has t or t-1 edges of it; when both
/// colors qualify the tie goes to Red for determinism.
inline NodeLabel node_label(const TwoColoring& c, NodeId v, std::size_t t) {
  if (c.red_deg[v] + 1 >= t && c.red_deg[v] <= t) return NodeLabel::RedL;
  if (c.blue_deg[v] + 1 >= t && c.blue_deg[v] <= t) return NodeLabel::BlueL;
  return NodeLabel::None;
}

inline EdgeColor label_color(NodeLabel l) {
  return l == NodeLabel::RedL ? EdgeColor::Red : EdgeColor::Blue;
}

/// Sources: nodes with exactly t edges of one color (ties to Red).
inline std::vector<NodeId> source_nodes(const Graph& g, const TwoColoring& c, std::size_t t) {
  std::vector<NodeId> s;
  for (NodeId v = 0; v < g.n(); ++v)
    if (c.red_deg[v] == t || c.blue_deg[v] == t) s.push_back(v);
  return s;
}

struct AugmentingPath {
  NodeId source = kHalf;
  std::vector<NodeId> nodes;  // v1..vk, v1 == source
  std::vector<EdgeId> edges;  // k-1 edges
};

/// Validates the alternating/augmenting invariants against the coloring as
/// it stands now. Used both for acceptance and for staleness detection.
inline bool validate_augmenting(const Graph& g, const TwoColoring& c, std::size_t t,
                                const AugmentingPath& p) {
  if (p.nodes.size() < 2 || p.edges.size() + 1 != p.nodes.size()) return false;
  if (p.nodes.front() != p.source) return false;
  NodeLabel l0 = node_label(c, p.source, t);
  if (l0 == NodeLabel::None) return false;
  if (c.deg(p.source, label_color(l0)) != t) return false;
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    const Edge& e = g.edge(p.edges[i]);
    if (e.is_half()) return false;
    NodeId a = p.nodes[i], b = p.nodes[i + 1];
    if (!((e.a == a && e.b == b) || (e.a == b && e.b == a))) return false;
    NodeLabel li = node_label(c, a, t);
    if (li == NodeLabel::None) return false;
    if (c.color[e.id] != label_color(li)) return false;
    if (i > 0) {
      NodeLabel lp = node_label(c, p.nodes[i - 1], t);
      if (li == lp) return false;  // interior labels must alternate
    }
  }
  NodeLabel lk = node_label(c, p.nodes.back(), t);
  NodeLabel lprev = node_label(c, p.nodes[p.nodes.size() - 2], t);
  return lk == NodeLabel::None || lk == lprev;
}

/// Flip every edge along a validated path; throws on staleness.
inline void augment(const Graph& g, TwoColoring& c, std::size_t t, const AugmentingPath& p) {
  if (!validate_augmenting(g, c, t, p)) throw StalePath("augmenting path no longer valid");
  for (EdgeId e : p.edges) c.flip(g.edge(e));
}

// ---------------------------------------------------------------------------
// Deterministic token search (pseudo-tree growth).

namespace detail_split {

struct Token {
  NodeId src;
  NodeId pos;
  std::vector<EdgeId> trace;
  std::vector<NodeId> nodes;
  bool active = true;  // paused split children carry active == false
};

inline bool trace_less(const Token& a, const Token& b) {
  if (a.src != b.src) return a.src < b.src;
  return a.trace < b.trace;
}

}  // namespace detail_split

/// Grow pseudo-trees from every source simultaneously with split tokens;
/// returns one augmenting path per successful source, pairwise ordered
/// disjoint with distinct sources.
inline std::vector<AugmentingPath> find_augmenting_paths(const Graph& g, const TwoColoring& c,
                                                         std::size_t t, double eps,
                                                         const SplitConfig& cfg = {},
                                                         RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  for (NodeId v = 0; v < g.n(); ++v)
    if (c.red_deg[v] > t || c.blue_deg[v] > t)
      throw PreconditionError("coloring is not t-balanced");
  using detail_split::Token;
  std::vector<NodeLabel> labels(g.n());
  for (NodeId v = 0; v < g.n(); ++v) labels[v] = node_label(c, v, t);
  const std::size_t d = g.max_degree();
  const double lm = std::max(1.0, std::log(std::max<std::size_t>(g.m(), 2)) / std::log(1.5));
  const std::size_t levels = static_cast<std::size_t>(std::ceil(lm));
  const std::size_t h =
      static_cast<std::size_t>(std::ceil((16.0 / 3.0) * lm * lm / eps));
  const std::size_t budget_per_level =
      (2 * t > d + 2) ? static_cast<std::size_t>(std::floor((2.0 * t - d - 2.0) / lm)) : 0;

  std::vector<NodeId> sources = source_nodes(g, c, t);
  std::map<NodeId, std::vector<Token>> tokens;
  std::map<NodeId, AugmentingPath> saved;
  std::set<NodeId> done, failed;
  for (NodeId s : sources) tokens[s] = {Token{s, s, {}, {s}, true}};
  std::vector<bool> used(2 * g.m(), false);  // directed edge usage
  auto dir_index = [&](const Edge& e, NodeId tail) {
    return 2 * static_cast<std::size_t>(e.id) + (tail == e.a ? 0 : 1);
  };
  auto consider_terminal = [&](Token& tk, NodeLabel from_label) {
    NodeLabel lw = labels[tk.pos];
    if (lw != NodeLabel::None && lw != from_label) return false;
    AugmentingPath p{tk.src, tk.nodes, tk.trace};
    auto it = saved.find(tk.src);
    if (it == saved.end() || p.edges < it->second.edges) saved[tk.src] = std::move(p);
    tk.active = false;
    return true;
  };

  std::size_t L = 1;
  std::size_t steps_run = 0, moves = 0;
  for (std::size_t level = 1; level <= levels; ++level) {
    if (static_cast<std::size_t>(done.size() + failed.size()) >= sources.size()) break;
    std::vector<std::size_t> budget(g.n(), budget_per_level);
    std::set<NodeId> split_sources;  // tokens that split this level pause
    for (std::size_t step = 0; step < h; ++step) {
      // Gather active tokens by node, deterministically ordered.
      std::map<NodeId, std::vector<std::pair<NodeId, std::size_t>>> at;  // node -> (src, idx)
      for (auto& [s, tks] : tokens) {
        if (done.count(s) || failed.count(s)) continue;
        for (std::size_t i = 0; i < tks.size(); ++i)
          if (tks[i].active) at[tks[i].pos].emplace_back(s, i);
      }
      if (at.empty()) break;
      ++steps_run;
      for (auto& [u, reqs] : at) {
        NodeLabel lu = labels[u];
        if (lu == NodeLabel::None) continue;  // cannot happen for live tokens
        std::sort(reqs.begin(), reqs.end(), [&](const auto& x, const auto& y) {
          return detail_split::trace_less(tokens[x.first][x.second], tokens[y.first][y.second]);
        });
        // Unused same-color edges out of u, ascending id.
        std::vector<std::pair<EdgeId, NodeId>> avail;
        for (const Incidence& inc : g.incident(u)) {
          if (inc.other == kHalf) continue;
          const Edge& e = g.edge(inc.edge);
          if (c.color[e.id] != label_color(lu)) continue;
          if (used[dir_index(e, u)]) continue;
          avail.emplace_back(inc.edge, inc.other);
        }
        std::sort(avail.begin(), avail.end());
        std::size_t next_edge = 0;
        std::size_t two_grants = std::min(reqs.size(), budget[u]);
        for (std::size_t r = 0; r < reqs.size(); ++r) {
          Token& tk = tokens[reqs[r].first][reqs[r].second];
          std::size_t want = (r < two_grants) ? 2 : 1;
          std::size_t got = std::min(want, avail.size() - next_edge);
          if (got == 0) continue;  // starved; stays and re-requests
          if (got == 2) --budget[u];
          std::vector<Token> children;
          for (std::size_t k = 0; k < got; ++k) {
            auto [eid, other] = avail[next_edge++];
            used[dir_index(g.edge(eid), u)] = true;
            Token child = tk;
            child.pos = other;
            child.trace.push_back(eid);
            child.nodes.push_back(other);
            ++moves;
            children.push_back(std::move(child));
          }
          if (got == 1) {
            tk = std::move(children[0]);
            consider_terminal(tk, lu);
          } else {
            // Split: both children pause until the next level.
            for (Token& ch : children) {
              if (!consider_terminal(ch, lu)) ch.active = false;
              tokens[reqs[r].first].push_back(std::move(ch));
            }
            split_sources.insert(reqs[r].first);
            // The parent token is consumed by the split.
            tokens[reqs[r].first][reqs[r].second].active = false;
            tokens[reqs[r].first][reqs[r].second].trace.assign(1, kHalf);  // tombstone
          }
        }
      }
      // Remove tombstoned parents.
      for (auto& [s, tks] : tokens)
        tks.erase(std::remove_if(tks.begin(), tks.end(),
                                 [](const Token& tk) {
                                   return !tk.trace.empty() && tk.trace[0] == kHalf;
                                 }),
                  tks.end());
    }
    // Level end: settle each source.
    std::size_t L_next = 2 * ((3 * L + 3) / 4);
    for (NodeId s : sources) {
      if (done.count(s) || failed.count(s)) continue;
      if (saved.count(s)) {
        done.insert(s);
        tokens[s].clear();
        continue;
      }
      auto& tks = tokens[s];
      // Survivors: paused split children plus still-active unsplit tokens.
      if (tks.size() < L_next) {
        failed.insert(s);
        tks.clear();
        continue;
      }
      std::sort(tks.begin(), tks.end(), detail_split::trace_less);
      tks.resize(L_next);
      for (auto& tk : tks) tk.active = true;
    }
    L = L_next;
  }
  if (metrics) {
    metrics->add_phase("find_paths", steps_run + levels);
    metrics->messages += moves;
  }
  std::vector<AugmentingPath> out;
  for (auto& [s, p] : saved) out.push_back(std::move(p));
  return out;
}

// ---------------------------------------------------------------------------
// Sequential alternating-path search (fallback and randomized greedy mode).
// BFS over nodes obeying the walking rule; the shortest augmenting walk is
// node-simple, so marking nodes visited loses nothing.

inline std::optional<AugmentingPath> sequential_augpath_search(
    const Graph& g, const TwoColoring& c, std::size_t t, NodeId s,
    const std::vector<bool>* used_dirs = nullptr, std::size_t max_len = 0) {
  std::vector<NodeLabel> labels(g.n());
  for (NodeId v = 0; v < g.n(); ++v) labels[v] = node_label(c, v, t);
  if (labels[s] == NodeLabel::None) return std::nullopt;
  if (max_len == 0) max_len = g.n();
  std::vector<NodeId> parent(g.n(), kHalf);
  std::vector<EdgeId> parent_edge(g.n(), kHalf);
  std::vector<std::size_t> depth(g.n(), 0);
  std::vector<bool> visited(g.n(), false);
  std::deque<NodeId> q = {s};
  visited[s] = true;
  auto build = [&](NodeId terminal, NodeId via, EdgeId ve) {
    AugmentingPath p;
    p.source = s;
    std::vector<NodeId> rev_nodes = {terminal};
    std::vector<EdgeId> rev_edges = {ve};
    for (NodeId w = via; w != s; w = parent[w]) {
      rev_nodes.push_back(w);
      rev_edges.push_back(parent_edge[w]);
    }
    rev_nodes.push_back(s);
    p.nodes.assign(rev_nodes.rbegin(), rev_nodes.rend());
    p.edges.assign(rev_edges.rbegin(), rev_edges.rend());
    return p;
  };
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    if (depth[u] + 1 > max_len) continue;
    NodeLabel lu = labels[u];
    std::vector<std::pair<EdgeId, NodeId>> nexts;
    for (const Incidence& inc : g.incident(u)) {
      if (inc.other == kHalf) continue;
      const Edge& e = g.edge(inc.edge);
      if (c.color[e.id] != label_color(lu)) continue;
      if (used_dirs && (*used_dirs)[2 * static_cast<std::size_t>(e.id) + (u == e.a ? 0 : 1)])
        continue;
      nexts.emplace_back(inc.edge, inc.other);
    }
    std::sort(nexts.begin(), nexts.end());
    for (auto [eid, w] : nexts) {
      NodeLabel lw = labels[w];
      if (lw == NodeLabel::None || lw == lu) return build(w, u, eid);
      if (!visited[w]) {
        visited[w] = true;
        parent[w] = u;
        parent_edge[w] = eid;
        depth[w] = depth[u] + 1;
        q.push_back(w);
      }
    }
  }
  return std::nullopt;
}

/// Keep one path per terminal node (smallest source id wins), then augment
/// sequentially; paths invalidated by earlier flips are skipped.
inline std::size_t accept_and_augment(const Graph& g, TwoColoring& c, std::size_t t,
                                      std::vector<AugmentingPath>& paths) {
  std::sort(paths.begin(), paths.end(), [](const AugmentingPath& a, const AugmentingPath& b) {
    if (a.nodes.back() != b.nodes.back()) return a.nodes.back() < b.nodes.back();
    return a.source < b.source;
  });
  std::size_t augmented = 0;
  NodeId last_terminal = kHalf;
  bool first = true;
  for (const AugmentingPath& p : paths) {
    if (!first && p.nodes.back() == last_terminal) continue;
    first = false;
    last_terminal = p.nodes.back();
    if (!validate_augmenting(g, c, t, p)) continue;  // stale
    for (EdgeId e : p.edges) c.flip(g.edge(e));
    ++augmented;
  }
  return augmented;
}

/// Turn a t-balanced coloring into a (t-1)-balanced one by repeated
/// augmentation; deterministic token search with a sequential safety net.
inline void improve_balance(const Graph& g, TwoColoring& c, std::size_t t, double eps,
                            const SplitConfig& cfg = {}, RunMetrics* metrics = nullptr) {
  const std::size_t d = std::max<std::size_t>(g.max_degree(), 1);
  const std::size_t cap =
      cfg.improve_cap_factor == 0
          ? static_cast<std::size_t>(-1)
          : cfg.improve_cap_factor * d *
                static_cast<std::size_t>(std::ceil(std::log2(std::max<NodeId>(g.n(), 2)) + 1));
  std::size_t iters = 0;
  while (true) {
    std::vector<NodeId> sources = source_nodes(g, c, t);
    if (sources.empty()) return;
    if (++iters > cap)
      throw BudgetExceeded("improve_balance cap hit with " + std::to_string(sources.size()) +
                           " sources left at t=" + std::to_string(t));
    std::vector<AugmentingPath> paths = find_augmenting_paths(g, c, t, eps, cfg, metrics);
    std::size_t augmented = paths.empty() ? 0 : accept_and_augment(g, c, t, paths);
    if (augmented == 0) {
      // Sequential safety net: place one path directly.
      for (NodeId s : sources) {
        auto p = sequential_augpath_search(g, c, t, s);
        if (p) {
          augment(g, c, t, *p);
          ++augmented;
          break;
        }
      }
      if (augmented == 0)
        throw InvariantViolation("no augmenting path exists for " +
                                 std::to_string(sources.size()) + " sources at t=" +
                                 std::to_string(t));
    }
  }
}

// ---------------------------------------------------------------------------
// Full splits.

/// Greedy deterministic start: each edge takes the color its endpoints have
/// less of; very close to balanced already on most inputs.
inline TwoColoring greedy_initial_coloring(const Graph& g) {
  TwoColoring c(g, EdgeColor::Red);
  c.color.assign(g.m(), EdgeColor::Red);
  c.red_deg.assign(g.n(), 0);
  c.blue_deg.assign(g.n(), 0);
  for (const Edge& e : g.edges()) {
    std::size_t red = c.red_deg[e.a], blue = c.blue_deg[e.a];
    if (!e.is_half()) {
      red += c.red_deg[e.b];
      blue += c.blue_deg[e.b];
    }
    EdgeColor pick = (blue < red) ? EdgeColor::Blue : EdgeColor::Red;
    c.color[e.id] = pick;
    auto& arr = (pick == EdgeColor::Red) ? c.red_deg : c.blue_deg;
    ++arr[e.a];
    if (!e.is_half()) ++arr[e.b];
  }
  return c;
}

inline std::size_t max_color_degree(const Graph& g, const TwoColoring& c) {
  std::size_t t = 0;
  for (NodeId v = 0; v < g.n(); ++v)
    t = std::max<std::size_t>(t, std::max(c.red_deg[v], c.blue_deg[v]));
  return t;
}

/// floor((1+eps)*x/2) respectively ceil, kept in one place so every caller
/// rounds the same way.
inline std::size_t balance_floor(double eps, std::size_t x) {
  return static_cast<std::size_t>(std::floor((1.0 + eps) * static_cast<double>(x) / 2.0));
}
inline std::size_t balance_ceil(double eps, std::size_t x) {
  return static_cast<std::size_t>(std::ceil((1.0 + eps) * static_cast<double>(x) / 2.0));
}

inline TwoColoring balanced_split_low(const Graph& g, double eps, const SplitConfig& cfg = {},
                                      RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0))
    throw ParameterError("eps must lie in (0, 1); use balanced_split_randomized otherwise");
  TwoColoring c = greedy_initial_coloring(g);
  if (g.m() == 0) return c;
  const std::size_t d = g.max_degree();
  const std::size_t target = balance_floor(eps, d);
  for (std::size_t t = max_color_degree(g, c); t > target; --t)
    improve_balance(g, c, t, eps, cfg, metrics);
  if (!check_balance(g, c, target).ok())
    throw InvariantViolation("balanced_split_low missed its balance target");
  return c;
}

inline TwoColoring balanced_split_high(const Graph& g, double eps, const SplitConfig& cfg = {},
                                       RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (g.m() == 0) return TwoColoring(g, EdgeColor::Red);
  const std::size_t delta = g.max_degree();
  const double epsp = eps / 2.0;
  const double lm = std::max(1.0, std::log(std::max<std::size_t>(g.m(), 2)) / std::log(1.5));
  const std::size_t dvirt = static_cast<std::size_t>(std::ceil(4.0 * lm / epsp));
  TwoColoring c;
  if (dvirt >= delta) {
    c = balanced_split_low(g, epsp, cfg, metrics);
  } else {
    auto [gv, vm] = virtualize(g, dvirt);
    TwoColoring cv = balanced_split_low(gv, epsp, cfg, metrics);
    c = TwoColoring(g, EdgeColor::Red);
    for (EdgeId e = 0; e < g.m(); ++e) c.set(g.edge(e), cv.color[e]);
  }
  if (!check_balance(g, c, balance_floor(eps, delta)).ok())
    throw InvariantViolation("balanced_split_high missed its balance target");
  return c;
}

// ---------------------------------------------------------------------------
// Randomized path finding (no eps*d lower bound needed).

enum class PathMode { GreedySequential, LubySupergraph };

inline std::vector<AugmentingPath> find_paths_randomized(const Graph& g, const TwoColoring& c,
                                                         std::size_t t, double eps,
                                                         std::uint64_t seed, PathMode mode,
                                                         const SplitConfig& cfg = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  const std::size_t l = static_cast<std::size_t>(
      std::ceil(cfg.c_l * std::log(std::max<NodeId>(g.n(), 2)) / eps));
  std::vector<NodeId> sources = source_nodes(g, c, t);
  if (mode == PathMode::GreedySequential) {
    std::vector<bool> used(2 * g.m(), false);
    std::vector<AugmentingPath> out;
    for (NodeId s : sources) {
      auto p = sequential_augpath_search(g, c, t, s, &used, l);
      if (!p) continue;
      for (std::size_t i = 0; i + 1 < p->nodes.size(); ++i) {
        const Edge& e = g.edge(p->edges[i]);
        used[2 * static_cast<std::size_t>(e.id) + (p->nodes[i] == e.a ? 0 : 1)] = true;
      }
      out.push_back(std::move(*p));
    }
    return out;
  }
  // Luby mode: enumerate every augmenting path up to length min(l, 10) and
  // run a seeded Luby MIS over the conflict supergraph.
  if (g.n() > cfg.luby_node_cap)
    throw ParameterError("luby-supergraph mode is capped at n <= " +
                         std::to_string(cfg.luby_node_cap));
  const std::size_t lcap = std::min<std::size_t>(l, 10);
  std::vector<NodeLabel> labels(g.n());
  for (NodeId v = 0; v < g.n(); ++v) labels[v] = node_label(c, v, t);
  std::vector<AugmentingPath> all;
  for (NodeId s : sources) {
    AugmentingPath cur;
    cur.source = s;
    cur.nodes = {s};
    std::vector<bool> on_path(g.n(), false);
    on_path[s] = true;
    // Depth-first over alternating prefixes; interiors stay simple, but a
    // terminal may revisit a path node.
    std::function<void(NodeId)> rec = [&](NodeId u) {
      if (all.size() > cfg.luby_budget)
        throw BudgetExceeded("candidate-path enumeration over budget; use greedy-sequential");
      if (cur.edges.size() >= lcap) return;
      NodeLabel lu = labels[u];
      std::vector<std::pair<EdgeId, NodeId>> nexts;
      for (const Incidence& inc : g.incident(u)) {
        if (inc.other == kHalf) continue;
        if (c.color[inc.edge] != label_color(lu)) continue;
        nexts.emplace_back(inc.edge, inc.other);
      }
      std::sort(nexts.begin(), nexts.end());
      for (auto [eid, w] : nexts) {
        NodeLabel lw = labels[w];
        bool terminal = (lw == NodeLabel::None || lw == lu);
        if (!terminal && on_path[w]) continue;
        cur.nodes.push_back(w);
        cur.edges.push_back(eid);
        if (terminal) {
          all.push_back(cur);
        } else {
          on_path[w] = true;
          rec(w);
          on_path[w] = false;
        }
        cur.nodes.pop_back();
        cur.edges.pop_back();
      }
    };
    if (labels[s] != NodeLabel::None) rec(s);
  }
  // Conflicts: same source, or a shared ordered node pair.
  auto pairs_of = [&](const AugmentingPath& p) {
    std::vector<std::uint64_t> ps;
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
      ps.push_back((static_cast<std::uint64_t>(p.nodes[i]) << 32) | p.nodes[i + 1]);
    std::sort(ps.begin(), ps.end());
    return ps;
  };
  std::vector<std::vector<std::uint64_t>> ppairs;
  for (const auto& p : all) ppairs.push_back(pairs_of(p));
  auto conflict = [&](std::size_t i, std::size_t j) {
    if (all[i].source == all[j].source) return true;
    const auto& a = ppairs[i];
    const auto& b = ppairs[j];
    std::size_t x = 0, y = 0;
    while (x < a.size() && y < b.size()) {
      if (a[x] == b[y]) return true;
      (a[x] < b[y]) ? ++x : ++y;
    }
    return false;
  };
  std::vector<std::vector<std::size_t>> adj(all.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (conflict(i, j)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  std::vector<int> state(all.size(), 0);  // 0 alive, 1 in MIS, -1 removed
  std::size_t round = 0;
  while (true) {
    std::vector<std::uint64_t> val(all.size());
    bool any_alive = false;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (state[i] == 0) {
        any_alive = true;
        val[i] = mix64(key_combine(seed, key_combine(round, i)));
      }
    if (!any_alive) break;
    std::vector<std::size_t> winners;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (state[i] != 0) continue;
      bool is_min = true;
      for (std::size_t j : adj[i])
        if (state[j] == 0 && (val[j] < val[i] || (val[j] == val[i] && j < i))) is_min = false;
      if (is_min) winners.push_back(i);
    }
    for (std::size_t i : winners) state[i] = 1;
    for (std::size_t i : winners)
      for (std::size_t j : adj[i])
        if (state[j] == 0) state[j] = -1;
    ++round;
  }
  std::vector<AugmentingPath> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (state[i] == 1) out.push_back(all[i]);
  std::sort(out.begin(), out.end(),
            [](const AugmentingPath& a, const AugmentingPath& b) { return a.source < b.source; });
  return out;
}

inline TwoColoring balanced_split_randomized(const Graph& g, double eps, std::uint64_t seed,
                                             const SplitConfig& cfg = {},
                                             RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  TwoColoring c(g, EdgeColor::Red);
  RngStream rng(seed, 0x73706c74ULL);
  for (const Edge& e : g.edges()) c.set(e, rng.bernoulli(0.5) ? EdgeColor::Red : EdgeColor::Blue);
  if (g.m() == 0) return c;
  const std::size_t delta = g.max_degree();
  const std::size_t target = balance_ceil(eps, delta);
  const std::size_t d = std::max<std::size_t>(delta, 1);
  const std::size_t cap =
      cfg.improve_cap_factor == 0
          ? static_cast<std::size_t>(-1)
          : cfg.improve_cap_factor * d *
                static_cast<std::size_t>(std::ceil(std::log2(std::max<NodeId>(g.n(), 2)) + 1));
  for (std::size_t t = max_color_degree(g, c); t > target; --t) {
    std::size_t iters = 0;
    while (true) {
      std::vector<NodeId> sources = source_nodes(g, c, t);
      if (sources.empty()) break;
      if (++iters > cap)
        throw BudgetExceeded("balanced_split_randomized cap hit at t=" + std::to_string(t));
      std::vector<AugmentingPath> paths =
          find_paths_randomized(g, c, t, eps, key_combine(seed, t * 131071 + iters),
                                PathMode::GreedySequential, cfg);
      std::size_t augmented = paths.empty() ? 0 : accept_and_augment(g, c, t, paths);
      if (augmented == 0) {
        for (NodeId s : sources) {
          auto p = sequential_augpath_search(g, c, t, s);
          if (p) {
            augment(g, c, t, *p);
            ++augmented;
            break;
          }
        }
        if (augmented == 0)
          throw InvariantViolation("no augmenting path for residual sources at t=" +
                                   std::to_string(t));
      }
      if (metrics) metrics->messages += augmented;
    }
  }
  if (!check_balance(g, c, target).ok())
    throw InvariantViolation("balanced_split_randomized missed its balance target");
  if (metrics) metrics->add_phase("randomized_split", max_color_degree(g, c));
  return c;
}

}  // namespace degsplit
