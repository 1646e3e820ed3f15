#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "degsplit/assignments.hpp"
#include "degsplit/errors.hpp"
#include "degsplit/graph.hpp"
#include "degsplit/local_sim.hpp"
#include "degsplit/oracles.hpp"
#include "degsplit/rng.hpp"

namespace degsplit {

struct OrientConfig {
  /// Path-length cap multiplier: iterations stop after ceil(cl * ln n / eps).
  double cl = 3.0;
  /// Iteration cap factor for the out-degree reducer's augmentation loop.
  std::size_t improve_cap_factor = 10;
  /// Toy-mode limits for the MIS-based path selection.
  std::size_t luby_node_cap = 60;
  std::size_t luby_budget = 200000;
  /// forest_decompose retries and its a >= c2 * ln n / eps^2 precondition.
  std::size_t forest_retry_cap = 10;
  double forest_c2 = 1.0;
};

enum class OrientMode { BlockingGreedy, LubyRounds };

inline Orientation initial_orientation(const Graph& g) {
  Orientation o(g.m());
  for (const Edge& e : g.edges()) o.set(e, e.a);
  return o;
}

namespace detail_orient {

inline void require_plain(const Graph& g) {
  for (const Edge& e : g.edges())
    if (e.is_half()) throw PreconditionError("half-edges are not supported here");
}

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

/// Flow-style reduction of all out-degrees to <= D against two sentinel
/// nodes: a source feeding heavy nodes (out > D) and a sink draining light
/// ones (out < D). Flipping a shortest source-sink path moves one unit.
class FlowReducer {
 public:
  FlowReducer(const Graph& g, Orientation& o, std::size_t D)
      : g_(g), o_(o), D_(D), out_(o.out_degrees(g)) {}

  bool heavy_remains() const {
    for (NodeId v = 0; v < g_.n(); ++v)
      if (out_[v] > D_) return true;
    return false;
  }

  /// Exact shortest source-to-sink distance under the current orientation.
  std::size_t source_sink_distance() const {
    std::vector<std::size_t> dist(g_.n(), kInf);
    std::deque<NodeId> q;
    for (NodeId v = 0; v < g_.n(); ++v)
      if (out_[v] > D_) {
        dist[v] = 1;
        q.push_back(v);
      }
    std::size_t best = kInf;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop_front();
      if (dist[v] + 1 >= best) break;
      if (out_[v] < D_) {
        best = std::min(best, dist[v] + 1);
        continue;
      }
      for (const Incidence& inc : g_.incident(v)) {
        if (o_.from[inc.edge] != v) continue;
        NodeId w = inc.other;
        if (dist[w] > dist[v] + 1) {
          dist[w] = dist[v] + 1;
          if (out_[w] < D_) best = std::min(best, dist[w] + 1);
          q.push_back(w);
        }
      }
    }
    return best;
  }

  /// One blocking phase at path length len: flips a maximal set of
  /// edge-disjoint source-sink paths of exactly that length.
  std::size_t blocking_phase(std::size_t len) {
    std::vector<std::size_t> dist(g_.n(), kInf);
    std::vector<NodeId> starts;
    std::deque<NodeId> q;
    for (NodeId v = 0; v < g_.n(); ++v)
      if (out_[v] > D_) {
        dist[v] = 1;
        q.push_back(v);
        starts.push_back(v);
      }
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop_front();
      if (dist[v] + 1 >= len) continue;
      if (dist[v] > 1 && out_[v] < D_) continue;  // sink-adjacent, do not pass
      for (const Incidence& inc : g_.incident(v)) {
        if (o_.from[inc.edge] != v) continue;
        NodeId w = inc.other;
        if (dist[w] > dist[v] + 1) {
          dist[w] = dist[v] + 1;
          q.push_back(w);
        }
      }
    }
    std::vector<bool> used(g_.m(), false);
    std::vector<std::size_t> it(g_.n(), 0);
    std::vector<std::vector<Incidence>> adj(g_.n());
    for (NodeId v = 0; v < g_.n(); ++v)
      adj[v].assign(g_.incident(v).begin(), g_.incident(v).end());
    std::size_t flips = 0;
    std::vector<EdgeId> path;
    std::function<bool(NodeId)> dfs = [&](NodeId v) -> bool {
      if (dist[v] + 1 == len && out_[v] < D_) return true;  // reached the sink
      if (dist[v] + 1 >= len) return false;
      if (dist[v] > 1 && out_[v] < D_) return false;
      for (std::size_t& k = it[v]; k < adj[v].size(); ++k) {
        const Incidence& inc = adj[v][k];
        if (used[inc.edge] || o_.from[inc.edge] != v) continue;
        if (dist[inc.other] != dist[v] + 1) continue;
        path.push_back(inc.edge);
        if (dfs(inc.other)) return true;
        path.pop_back();
      }
      return false;
    };
    for (NodeId s : starts) {
      while (out_[s] > D_) {
        path.clear();
        std::fill(it.begin(), it.end(), 0);  // flips may revive dead branches
        if (!dfs(s)) break;
        flip_path(path, used);
        ++flips;
      }
    }
    return flips;
  }

  /// Toy-scale phase: enumerate every length-len path, pick a seeded MIS of
  /// the conflict graph, flip the winners, repeat until none remain.
  std::size_t luby_phase(std::size_t len, std::uint64_t seed, const OrientConfig& cfg) {
    std::size_t flips = 0, round = 0;
    while (true) {
      std::vector<std::vector<EdgeId>> cand = enumerate_paths(len, cfg.luby_budget);
      if (cand.empty()) return flips;
      std::size_t p = cand.size();
      // Conflict: shared edge, start, or terminal; conservative yet sound
      // because the outer loop repeats until exhaustion.
      std::vector<std::vector<std::size_t>> nbr(p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
          if (conflict(cand[i], cand[j])) {
            nbr[i].push_back(j);
            nbr[j].push_back(i);
          }
      std::vector<bool> alive(p, true);
      std::vector<int> state(p, 0);  // 0 undecided, 1 in MIS, 2 removed
      while (true) {
        std::vector<std::uint64_t> val(p);
        bool any = false;
        for (std::size_t i = 0; i < p; ++i)
          if (alive[i]) {
            val[i] = mix64(key_combine(seed, key_combine(round, i)));
            any = true;
          }
        if (!any) break;
        std::vector<std::size_t> winners;
        for (std::size_t i = 0; i < p; ++i) {
          if (!alive[i]) continue;
          bool is_min = true;
          for (std::size_t j : nbr[i])
            if (alive[j] && (val[j] < val[i] || (val[j] == val[i] && j < i))) is_min = false;
          if (is_min) winners.push_back(i);
        }
        for (std::size_t i : winners) {
          state[i] = 1;
          alive[i] = false;
          for (std::size_t j : nbr[i])
            if (alive[j]) {
              state[j] = 2;
              alive[j] = false;
            }
        }
        ++round;
      }
      std::vector<bool> used(g_.m(), false);
      for (std::size_t i = 0; i < p; ++i)
        if (state[i] == 1) {
          flip_path(cand[i], used);
          ++flips;
        }
    }
  }

  const std::vector<std::size_t>& out() const { return out_; }
  std::size_t target() const { return D_; }

 private:
  void flip_path(const std::vector<EdgeId>& path, std::vector<bool>& used) {
    NodeId head = o_.from[path.front()];
    NodeId tail = o_.to[path.back()];
    for (EdgeId e : path) {
      used[e] = true;
      o_.flip(e);
    }
    --out_[head];
    ++out_[tail];
  }

  bool conflict(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) const {
    if (o_.from[a.front()] == o_.from[b.front()]) return true;
    if (o_.to[a.back()] == o_.to[b.back()]) return true;
    for (EdgeId x : a)
      for (EdgeId y : b)
        if (x == y) return true;
    return false;
  }

  std::vector<std::vector<EdgeId>> enumerate_paths(std::size_t len, std::size_t budget) const {
    std::vector<std::vector<EdgeId>> res;
    std::size_t visits = 0;
    std::vector<EdgeId> path;
    std::vector<bool> on_path(g_.n(), false);
    std::function<void(NodeId)> rec = [&](NodeId v) {
      if (++visits > budget) throw BudgetExceeded("path enumeration budget exhausted");
      if (path.size() + 2 == len && out_[v] < D_) {
        res.push_back(path);
        return;
      }
      if (path.size() + 2 >= len) return;
      if (!path.empty() && out_[v] < D_) return;
      on_path[v] = true;
      for (const Incidence& inc : g_.incident(v)) {
        if (o_.from[inc.edge] != v || on_path[inc.other]) continue;
        path.push_back(inc.edge);
        rec(inc.other);
        path.pop_back();
      }
      on_path[v] = false;
    };
    for (NodeId v = 0; v < g_.n(); ++v)
      if (out_[v] > D_) {
        path.clear();
        rec(v);
      }
    return res;
  }

  const Graph& g_;
  Orientation& o_;
  std::size_t D_;
  std::vector<std::size_t> out_;
};

/// Drive the reducer until no heavy node remains; fills dist_trace with the
/// measured source-sink distance after each iteration.
inline void run_reduction(const Graph& g, Orientation& o, std::size_t D, double eps,
                          OrientMode mode, const OrientConfig& cfg,
                          std::vector<std::size_t>* dist_trace, RunMetrics* metrics) {
  FlowReducer fr(g, o, D);
  const std::size_t l = static_cast<std::size_t>(
      std::ceil(cfg.cl * std::log(static_cast<double>(std::max<NodeId>(g.n(), 2))) / eps));
  std::size_t iters = 0;
  for (std::size_t i = 0; fr.heavy_remains(); ++i) {
    if (i > l)
      throw InvariantViolation("heavy node remains after " + std::to_string(l) +
                               " iterations; density assumption violated");
    std::size_t len = 3 + i;
    // Repeat until the distance rises: a heavy node turning light mid-phase
    // can open fresh length-len routes the snapshot layering missed.
    std::size_t dist;
    while ((dist = fr.source_sink_distance()) == len) {
      if (mode == OrientMode::BlockingGreedy) {
        if (fr.blocking_phase(len) == 0) break;
      } else {
        if (g.n() > cfg.luby_node_cap)
          throw ParameterError("luby-rounds mode is capped to small instances");
        if (fr.luby_phase(len, 0x6f7269656e74ULL + i, cfg) == 0) break;
      }
    }
    if (dist < len + 1)
      throw InvariantViolation("source-sink distance " + std::to_string(dist) +
                               " below the blocking bound after iteration " + std::to_string(i));
    if (dist_trace) dist_trace->push_back(dist);
    ++iters;
  }
  if (metrics) {
    metrics->add_phase("orient_flow", iters == 0 ? 1 : 3 + iters);
    metrics->messages += iters * 2 * g.m();
  }
}

}  // namespace detail_orient

/// Low-out-degree orientation for graphs of arboricity <= a:
/// out-degree <= D = ceil((1+eps)*a) via maximal sets of edge-disjoint
/// shortest source-sink paths of growing length.
inline Orientation arboricity_orient(const Graph& g, std::size_t a, double eps,
                                     OrientMode mode = OrientMode::BlockingGreedy,
                                     const OrientConfig& cfg = {},
                                     std::vector<std::size_t>* dist_trace = nullptr,
                                     RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (a == 0) throw ParameterError("arboricity bound must be positive");
  detail_orient::require_plain(g);
  const std::size_t D =
      static_cast<std::size_t>(std::ceil((1.0 + eps) * static_cast<double>(a)));
  Orientation o = initial_orientation(g);
  detail_orient::run_reduction(g, o, D, eps, mode, cfg, dist_trace, metrics);
  if (!check_in_out_bounds(g, o, D, g.m()).ok())
    throw InvariantViolation("arboricity_orient missed its out-degree bound");
  return o;
}

/// Run an out-degree-bounding inner twice, with every edge reversed in
/// between, so both the out-degree and the in-degree end up <= D. Soundness
/// needs the inner never to pull an out-degree below min(before, D).
inline Orientation bound_both_sides(
    const Graph& g,
    const std::function<Orientation(const Graph&, const Orientation&, std::size_t)>& inner,
    std::size_t D) {
  detail_orient::require_plain(g);
  const std::size_t delta = g.n() ? g.max_degree() : 0;
  if (D < (delta + 1) / 2)
    throw PreconditionError("bound_both_sides needs D >= ceil(Delta/2)");
  auto audit = [&](const Orientation& before, const Orientation& after) {
    std::vector<std::size_t> b = before.out_degrees(g), aft = after.out_degrees(g);
    for (NodeId v = 0; v < g.n(); ++v) {
      if (aft[v] > D)
        throw InvariantViolation("inner left node " + std::to_string(v) + " above the bound");
      if (aft[v] < std::min(b[v], D))
        throw InvariantViolation("inner dropped node " + std::to_string(v) +
                                 " below min(out, D)");
    }
  };
  Orientation init = initial_orientation(g);
  Orientation first = inner(g, init, D);
  audit(init, first);
  Orientation reversed = first;
  for (EdgeId e = 0; e < g.m(); ++e) reversed.flip(e);
  Orientation second = inner(g, reversed, D);
  audit(reversed, second);
  for (EdgeId e = 0; e < g.m(); ++e) second.flip(e);
  if (!check_in_out_bounds(g, second, D, D).ok())
    throw InvariantViolation("bound_both_sides missed a bound");
  return second;
}

// ---------------------------------------------------------------------------
// Deterministic directed splitting via token walks along out-edges.

namespace detail_orient {

struct DirectedPath {
  NodeId source = 0;
  std::vector<EdgeId> edges;
  std::vector<NodeId> nodes;  // source first
};

inline bool validate_directed(const Graph& g, const Orientation& o,
                              const std::vector<std::size_t>& out, std::size_t t,
                              const DirectedPath& p) {
  if (p.edges.empty()) return false;
  if (out[p.source] < t) return false;
  if (out[p.nodes.back()] + 2 > t) return false;
  NodeId at = p.source;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (o.from[p.edges[i]] != at) return false;
    at = o.to[p.edges[i]];
    if (at != p.nodes[i + 1]) return false;
  }
  for (std::size_t i = 0; i < p.edges.size(); ++i)
    for (std::size_t j = i + 1; j < p.edges.size(); ++j)
      if (p.edges[i] == p.edges[j]) return false;
  return true;
}

struct WalkToken {
  NodeId src;
  NodeId pos;
  std::vector<EdgeId> trace;
  bool active = true;
};

/// Token search mirroring the undirected machinery: tokens start at nodes of
/// out-degree >= t, walk unused out-edges, split under a per-level budget and
/// finish at any node of out-degree <= t-2. Paths are fully edge-disjoint.
inline std::vector<DirectedPath> find_directed_paths(const Graph& g, const Orientation& o,
                                                     std::size_t t, double eps,
                                                     RunMetrics* metrics = nullptr) {
  std::vector<std::size_t> out = o.out_degrees(g);
  const double lm = std::max(1.0, std::log(std::max<std::size_t>(g.m(), 2)) / std::log(1.5));
  const std::size_t levels = static_cast<std::size_t>(std::ceil(lm));
  const std::size_t h =
      static_cast<std::size_t>(std::ceil((16.0 / 3.0) * lm * lm / std::max(eps, 1e-9)));
  const std::size_t d = g.max_degree();
  const std::size_t budget =
      (2 * t > d + 2) ? static_cast<std::size_t>((2 * t - d - 2) / lm) : 0;

  std::vector<bool> used(g.m(), false);
  std::vector<WalkToken> tokens;
  std::map<NodeId, std::pair<NodeId, std::vector<EdgeId>>> done;  // terminal -> best
  auto consider = [&](NodeId term, NodeId src, const std::vector<EdgeId>& trace) {
    auto it = done.find(term);
    if (it == done.end() || trace < it->second.second ||
        (trace == it->second.second && src < it->second.first))
      done.insert_or_assign(term, std::make_pair(src, trace));
  };
  for (NodeId v = 0; v < g.n(); ++v)
    if (out[v] >= t) tokens.push_back(WalkToken{v, v, {}, true});
  std::size_t live = tokens.size();
  if (live == 0) return {};

  std::size_t L = 1, rounds = 0;
  for (std::size_t level = 0; level < levels && live > 0; ++level) {
    for (std::size_t step = 0; step < h && live > 0; ++step) {
      ++rounds;
      std::map<NodeId, std::vector<std::size_t>> requests;
      for (std::size_t k = 0; k < tokens.size(); ++k)
        if (tokens[k].active) requests[tokens[k].pos].push_back(k);
      std::vector<WalkToken> born;
      for (auto& [v, reqs] : requests) {
        std::vector<EdgeId> avail;
        for (const Incidence& inc : g.incident(v))
          if (!used[inc.edge] && o.from[inc.edge] == v) avail.push_back(inc.edge);
        std::sort(avail.begin(), avail.end());
        std::sort(reqs.begin(), reqs.end(), [&](std::size_t x, std::size_t y) {
          return tokens[x].trace < tokens[y].trace;
        });
        std::size_t grant2 = std::min(reqs.size(), budget);
        std::size_t next = 0;
        for (std::size_t r = 0; r < reqs.size(); ++r) {
          WalkToken& tk = tokens[reqs[r]];
          std::size_t want = (r < grant2) ? 2 : 1;
          std::size_t left = avail.size() > next ? avail.size() - next : 0;
          std::size_t got = std::min(want, left);
          if (got == 0) {
            tk.active = false;
            continue;
          }
          for (std::size_t q = 0; q < got; ++q) {
            EdgeId e = avail[next++];
            used[e] = true;
            NodeId w = o.to[e];
            if (q == 0) {
              tk.trace.push_back(e);
              tk.pos = w;
              if (out[w] + 2 <= t) {
                consider(w, tk.src, tk.trace);
                tk.active = false;
              }
            } else {
              WalkToken child = tk;
              child.active = true;
              child.trace.back() = e;
              child.pos = w;
              if (out[w] + 2 <= t)
                consider(w, child.src, child.trace);
              else
                born.push_back(std::move(child));
            }
          }
        }
      }
      for (auto& b : born) tokens.push_back(std::move(b));
      live = 0;
      for (const auto& tk : tokens)
        if (tk.active) ++live;
    }
    // Level end: thin the survivors to the next level's population.
    std::size_t L_next = 2 * ((3 * L + 3) / 4);
    std::vector<std::size_t> alive;
    for (std::size_t k = 0; k < tokens.size(); ++k)
      if (tokens[k].active) alive.push_back(k);
    std::sort(alive.begin(), alive.end(), [&](std::size_t x, std::size_t y) {
      return tokens[x].trace < tokens[y].trace;
    });
    if (alive.size() > L_next)
      for (std::size_t k = L_next; k < alive.size(); ++k) tokens[alive[k]].active = false;
    live = std::min(alive.size(), L_next);
    L = L_next;
  }
  if (metrics) {
    metrics->add_phase("directed_paths", rounds);
    metrics->messages += rounds * g.m();
  }
  std::vector<DirectedPath> res;
  for (auto& [term, best] : done) {
    DirectedPath p;
    p.source = best.first;
    p.edges = best.second;
    p.nodes.push_back(p.source);
    NodeId at = p.source;
    for (EdgeId e : p.edges) {
      at = o.to[e];
      p.nodes.push_back(at);
    }
    res.push_back(std::move(p));
  }
  return res;
}

/// BFS fallback: shortest walk from s along out-edges to a node that can
/// absorb one more (out <= t-2); shortest walks are node-simple.
inline std::optional<DirectedPath> sequential_directed_search(const Graph& g,
                                                              const Orientation& o,
                                                              const std::vector<std::size_t>& out,
                                                              std::size_t t, NodeId s) {
  std::vector<EdgeId> via(g.n(), static_cast<EdgeId>(-1));
  std::vector<NodeId> prev(g.n(), kHalf);
  std::vector<bool> seen(g.n(), false);
  std::deque<NodeId> q{s};
  seen[s] = true;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop_front();
    for (const Incidence& inc : g.incident(v)) {
      if (o.from[inc.edge] != v || seen[inc.other]) continue;
      seen[inc.other] = true;
      via[inc.other] = inc.edge;
      prev[inc.other] = v;
      if (out[inc.other] + 2 <= t) {
        DirectedPath p;
        p.source = s;
        NodeId at = inc.other;
        while (at != s) {
          p.edges.push_back(via[at]);
          p.nodes.push_back(at);
          at = prev[at];
        }
        p.nodes.push_back(s);
        std::reverse(p.edges.begin(), p.edges.end());
        std::reverse(p.nodes.begin(), p.nodes.end());
        return p;
      }
      q.push_back(inc.other);
    }
  }
  return std::nullopt;
}

/// Lower every out-degree to < t by flipping directed augmenting paths.
inline void improve_outdeg(const Graph& g, Orientation& o, std::size_t t, double eps,
                           const OrientConfig& cfg, RunMetrics* metrics) {
  const std::size_t d = std::max<std::size_t>(g.max_degree(), 1);
  const std::size_t cap =
      cfg.improve_cap_factor * d *
      static_cast<std::size_t>(std::ceil(std::log2(std::max<NodeId>(g.n(), 2)) + 1));
  std::size_t iters = 0;
  while (true) {
    std::vector<std::size_t> out = o.out_degrees(g);
    std::vector<NodeId> sources;
    for (NodeId v = 0; v < g.n(); ++v)
      if (out[v] >= t) sources.push_back(v);
    if (sources.empty()) return;
    if (++iters > cap)
      throw BudgetExceeded("improve_outdeg cap hit with " + std::to_string(sources.size()) +
                           " sources left at t=" + std::to_string(t));
    std::vector<DirectedPath> paths = find_directed_paths(g, o, t, eps, metrics);
    std::sort(paths.begin(), paths.end(), [](const DirectedPath& x, const DirectedPath& y) {
      return std::make_pair(x.nodes.back(), x.source) < std::make_pair(y.nodes.back(), y.source);
    });
    std::size_t augmented = 0;
    for (const DirectedPath& p : paths) {
      std::vector<std::size_t> cur = o.out_degrees(g);
      if (!validate_directed(g, o, cur, t, p)) continue;  // stale
      for (EdgeId e : p.edges) o.flip(e);
      ++augmented;
    }
    if (augmented == 0) {
      std::vector<std::size_t> cur = o.out_degrees(g);
      for (NodeId s : sources) {
        auto p = sequential_directed_search(g, o, cur, t, s);
        if (p) {
          for (EdgeId e : p->edges) o.flip(e);
          ++augmented;
          break;
        }
      }
      if (augmented == 0)
        throw InvariantViolation("no directed augmenting path for " +
                                 std::to_string(sources.size()) + " sources at t=" +
                                 std::to_string(t));
    }
  }
}

inline Orientation reduce_by_tokens(const Graph& g, const Orientation& init, std::size_t D,
                                    double eps, const OrientConfig& cfg, RunMetrics* metrics) {
  Orientation o = init;
  std::vector<std::size_t> out = o.out_degrees(g);
  std::size_t start = *std::max_element(out.begin(), out.end());
  for (std::size_t t = start; t > D; --t) improve_outdeg(g, o, t, eps, cfg, metrics);
  return o;
}

}  // namespace detail_orient

/// Deterministic directed splitting: in-degree and out-degree both at most
/// floor((1+eps)*Delta/2), by the token reducer run forwards and backwards.
inline Orientation directed_split_deterministic(const Graph& g, double eps,
                                                const OrientConfig& cfg = {},
                                                RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  detail_orient::require_plain(g);
  if (g.m() == 0) return Orientation(0);
  const std::size_t delta = g.max_degree();
  const std::size_t D =
      static_cast<std::size_t>(std::floor((1.0 + eps) * static_cast<double>(delta) / 2.0));
  auto inner = [&](const Graph& gg, const Orientation& init, std::size_t DD) {
    return detail_orient::reduce_by_tokens(gg, init, DD, eps, cfg, metrics);
  };
  return bound_both_sides(g, inner, D);
}

/// Randomized-analysis directed splitting: any graph has density at most
/// Delta/2, so the flow reducer reaches ceil((1+eps)*Delta/2) directly.
inline Orientation directed_split_randomized(const Graph& g, double eps,
                                             const OrientConfig& cfg = {},
                                             RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  detail_orient::require_plain(g);
  if (g.m() == 0) return Orientation(0);
  const std::size_t delta = g.max_degree();
  const std::size_t D =
      static_cast<std::size_t>(std::ceil((1.0 + eps) * static_cast<double>(delta) / 2.0));
  auto inner = [&](const Graph& gg, const Orientation& init, std::size_t DD) {
    Orientation o = init;
    detail_orient::run_reduction(gg, o, DD, eps, OrientMode::BlockingGreedy, cfg, nullptr,
                                 metrics);
    return o;
  };
  return bound_both_sides(g, inner, D);
}

/// Star-forest decomposition of an orientation with out-degree <= a(1+eps):
/// ceil(a(1+eps)) primary star forests by random activation, leftovers into
/// out-degree-1 slots split cycle-free, at most a(1+8eps) forests total.
inline ForestDecomposition forest_decompose(const Graph& g, const Orientation& o, std::size_t a,
                                            double eps, std::uint64_t seed,
                                            const OrientConfig& cfg = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  detail_orient::require_plain(g);
  const double n = static_cast<double>(std::max<NodeId>(g.n(), 2));
  if (static_cast<double>(a) < cfg.forest_c2 * std::log(n) / (eps * eps))
    throw PreconditionError("forest_decompose needs a >= c2 * ln n / eps^2");
  const std::size_t P =
      static_cast<std::size_t>(std::ceil(static_cast<double>(a) * (1.0 + eps)));
  std::vector<std::size_t> out = o.out_degrees(g);
  for (NodeId v = 0; v < g.n(); ++v)
    if (out[v] > P)
      throw PreconditionError("node " + std::to_string(v) + " out-degree exceeds a(1+eps)");
  const double q = (1.0 - eps) / (1.0 + eps);
  const std::size_t leftover_cap =
      static_cast<std::size_t>(std::ceil(3.0 * eps * static_cast<double>(a)));
  const std::size_t total_cap = static_cast<std::size_t>(
      std::floor(static_cast<double>(a) * (1.0 + 8.0 * eps) + 1e-9));

  std::vector<std::vector<EdgeId>> out_edges(g.n());
  for (const Edge& e : g.edges()) out_edges[o.from[e.id]].push_back(e.id);
  for (auto& v : out_edges) std::sort(v.begin(), v.end());

  std::string last_fail;
  for (std::size_t attempt = 0; attempt < cfg.forest_retry_cap; ++attempt) {
    RngStream rng(key_combine(seed, attempt), 0x666f72657374ULL);
    std::vector<std::vector<bool>> active(g.n(), std::vector<bool>(P, false));
    for (NodeId v = 0; v < g.n(); ++v)
      for (std::size_t j = 0; j < P; ++j) active[v][j] = rng.bernoulli(q);
    ForestDecomposition fd;
    fd.forest_of.assign(g.m(), static_cast<std::uint32_t>(-1));
    bool failed = false;
    std::vector<std::vector<EdgeId>> leftover(g.n());
    for (NodeId v = 0; v < g.n() && !failed; ++v) {
      std::vector<EdgeId> remaining = out_edges[v];
      std::size_t dummies = P - remaining.size();  // pre guarantees out <= P
      for (std::size_t j = 0; j < P; ++j) {
        if (!active[v][j]) continue;
        // Prefer a real out-edge with an inactive head; dummies absorb the
        // slot otherwise.
        std::size_t pick = remaining.size();
        for (std::size_t k = 0; k < remaining.size(); ++k) {
          NodeId head = o.to[remaining[k]];
          if (!active[head][j]) {
            pick = k;
            break;
          }
        }
        if (pick < remaining.size()) {
          fd.forest_of[remaining[pick]] = static_cast<std::uint32_t>(j);
          remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        } else if (dummies > 0) {
          --dummies;
        } else {
          last_fail = "node " + std::to_string(v) + " found no inactive head in forest " +
                      std::to_string(j);
          failed = true;
          break;
        }
      }
      if (!failed) {
        if (remaining.size() > leftover_cap) {
          last_fail = "node " + std::to_string(v) + " kept " +
                      std::to_string(remaining.size()) + " leftover edges (cap " +
                      std::to_string(leftover_cap) + ")";
          failed = true;
        } else {
          leftover[v] = std::move(remaining);
        }
      }
    }
    if (failed) continue;
    // Leftover slot s forms an out-degree-1 pseudoforest; break each cycle
    // by moving its smallest-id edge into the slot's companion forest.
    std::size_t slots = 0;
    for (NodeId v = 0; v < g.n(); ++v) slots = std::max(slots, leftover[v].size());
    fd.forests = P;
    fd.star_flag.assign(P, true);
    for (std::size_t s = 0; s < slots; ++s) {
      std::vector<EdgeId> succ(g.n(), static_cast<EdgeId>(-1));
      for (NodeId v = 0; v < g.n(); ++v)
        if (s < leftover[v].size()) succ[v] = leftover[v][s];
      std::uint32_t main_id = static_cast<std::uint32_t>(fd.forests++);
      fd.star_flag.push_back(false);
      std::uint32_t pair_id = static_cast<std::uint32_t>(-1);
      // Walk the functional graph; color states to find each cycle once.
      std::vector<std::uint8_t> state(g.n(), 0);
      for (NodeId v0 = 0; v0 < g.n(); ++v0) {
        if (state[v0] != 0) continue;
        std::vector<NodeId> stack;
        NodeId v = v0;
        while (v != kHalf && state[v] == 0) {
          state[v] = 1;
          stack.push_back(v);
          v = succ[v] == static_cast<EdgeId>(-1) ? kHalf : o.to[succ[v]];
        }
        if (v != kHalf && state[v] == 1) {
          // Found a fresh cycle through v: its smallest edge moves out.
          EdgeId best = succ[v];
          NodeId w = o.to[succ[v]];
          while (w != v) {
            best = std::min(best, succ[w]);
            w = o.to[succ[w]];
          }
          if (pair_id == static_cast<std::uint32_t>(-1)) {
            pair_id = static_cast<std::uint32_t>(fd.forests++);
            fd.star_flag.push_back(false);
          }
          fd.forest_of[best] = pair_id;
        }
        for (NodeId u : stack) state[u] = 2;
      }
      for (NodeId v = 0; v < g.n(); ++v)
        if (succ[v] != static_cast<EdgeId>(-1) &&
            fd.forest_of[succ[v]] == static_cast<std::uint32_t>(-1))
          fd.forest_of[succ[v]] = main_id;
    }
    for (EdgeId e = 0; e < g.m(); ++e)
      if (fd.forest_of[e] == static_cast<std::uint32_t>(-1))
        throw InvariantViolation("edge " + std::to_string(e) + " left unassigned");
    if (fd.forests > total_cap) {
      last_fail = "used " + std::to_string(fd.forests) + " forests (cap " +
                  std::to_string(total_cap) + ")";
      continue;
    }
    if (!check_forests(g, fd).ok()) {
      last_fail = "forest checker rejected the decomposition";
      continue;
    }
    return fd;
  }
  throw BudgetExceeded("forest_decompose retries exhausted: " + last_fail);
}

}  // namespace degsplit
