#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
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

struct SinklessConfig {
  /// Minimum degree above which the shattering path is used directly, and
  /// the lower bound demanded of contracted-cluster degrees before the same
  /// machinery runs on them.
  std::size_t high_threshold = 500;
  /// Fast path: min degree >= fast_c1 * ln n tries a uniformly random
  /// orientation first.
  double fast_c1 = 4.0;
  /// Cap on shortest-path enumeration per edge when tie-breaking cycles.
  std::size_t cycle_enum_budget = 20000;
};

// ---------------------------------------------------------------------------
// Shortest cycle through an edge, tie-broken by lexicographically minimal
// canonical edge-id sequence. Cycles are ordered by (length, canonical form);
// each edge is oriented by the minimal cycle containing it, which gives every
// node on a short cycle an outgoing edge (the minimal cycle through a node's
// incident short edges orients exactly one of its two edges at that node
// outward, and no smaller cycle can overrule either of them).

struct FoundCycle {
  std::vector<EdgeId> canon;     // canonical id sequence (comparison key)
  std::vector<NodeId> nodes;     // n0..n_{L-1}; edge i joins n_i, n_{i+1 mod L}
  std::vector<EdgeId> edge_seq;  // aligned with nodes

  std::size_t len() const { return canon.size(); }

  bool operator<(const FoundCycle& o) const {
    if (len() != o.len()) return len() < o.len();
    return canon < o.canon;
  }
};

inline std::vector<EdgeId> canonical_cycle_form(const std::vector<EdgeId>& seq) {
  std::size_t L = seq.size();
  std::vector<EdgeId> best;
  auto consider = [&](const std::vector<EdgeId>& s) {
    for (std::size_t r = 0; r < L; ++r) {
      std::vector<EdgeId> rot(L);
      for (std::size_t i = 0; i < L; ++i) rot[i] = s[(r + i) % L];
      if (best.empty() || rot < best) best = std::move(rot);
    }
  };
  consider(seq);
  std::vector<EdgeId> rev(seq.rbegin(), seq.rend());
  consider(rev);
  return best;
}

/// Reusable buffers for per-edge shortest-cycle queries.
class ShortCycleFinder {
 public:
  explicit ShortCycleFinder(const Graph& g, std::size_t enum_budget = 20000)
      : g_(g),
        du_(g.n(), 0),
        dv_(g.n(), 0),
        su_(g.n(), 0),
        sv_(g.n(), 0),
        budget_(enum_budget) {}

  /// Minimal cycle of length <= cutoff through edge e, or nullopt.
  std::optional<FoundCycle> through(EdgeId eid, std::size_t cutoff) {
    const Edge& e = g_.edge(eid);
    if (e.is_half() || cutoff < 2) return std::nullopt;
    ++stamp_;
    NodeId u = e.a, v = e.b;
    // Grow the two balls around u and v one level at a time (u first) and
    // stop at the first level where they meet. Any detour of length <= the
    // combined depth passes a node both balls have reached, so the first
    // meet certifies the minimal detour length D = du + dv and deeper
    // levels never need exploring.
    ball_u_.clear();
    ball_v_.clear();
    su_[u] = stamp_;
    du_[u] = 0;
    ball_u_.push_back(u);
    sv_[v] = stamp_;
    dv_[v] = 0;
    ball_v_.push_back(v);
    std::size_t D = cutoff;  // sentinel: > cutoff - 1 means none
    if (sv_[u] == stamp_) D = 0;
    std::size_t head_u = 0, head_v = 0;
    for (std::size_t t = 1; t < cutoff && D == cutoff; ++t) {
      bool uside = (t % 2 == 1);
      std::vector<NodeId>& ball = uside ? ball_u_ : ball_v_;
      std::size_t& head = uside ? head_u : head_v;
      std::vector<std::size_t>& dist = uside ? du_ : dv_;
      std::vector<std::uint64_t>& seen = uside ? su_ : sv_;
      const std::vector<std::size_t>& odist = uside ? dv_ : du_;
      const std::vector<std::uint64_t>& oseen = uside ? sv_ : su_;
      if (head_u == ball_u_.size() && head_v == ball_v_.size()) break;
      std::size_t level_end = ball.size();
      while (head < level_end) {
        NodeId x = ball[head++];
        for (const Incidence& inc : g_.incident(x)) {
          if (inc.edge == eid || inc.other == kHalf) continue;
          NodeId y = inc.other;
          if (seen[y] == stamp_) continue;
          seen[y] = stamp_;
          dist[y] = dist[x] + 1;
          ball.push_back(y);
          if (oseen[y] == stamp_) D = std::min(D, dist[y] + odist[y]);
        }
      }
    }
    if (D > cutoff - 1) return std::nullopt;
    std::size_t h1 = (D + 1) / 2, h2 = D - h1;
    // Enumerate all shortest u-v paths via meet nodes, pick the minimal cycle.
    std::optional<FoundCycle> best;
    std::size_t enumerated = 0;
    std::vector<NodeId> meets;
    for (NodeId x : ball_u_)
      if (du_[x] == h1 && sv_[x] == stamp_ && dv_[x] == h2) meets.push_back(x);
    std::sort(meets.begin(), meets.end());
    std::vector<std::pair<std::vector<NodeId>, std::vector<EdgeId>>> left, right;
    for (NodeId x : meets) {
      left.clear();
      right.clear();
      half_paths(x, u, du_, su_, eid, left);
      half_paths(x, v, dv_, sv_, eid, right);
      for (const auto& [lnodes, ledges] : left) {
        for (const auto& [rnodes, redges] : right) {
          if (++enumerated > budget_) break;
          // lnodes: x..u reversed to u..x; rnodes: x..v.
          FoundCycle c;
          c.nodes.assign(lnodes.rbegin(), lnodes.rend());  // u .. x
          c.edge_seq.assign(ledges.rbegin(), ledges.rend());
          // append x -> v (skip x itself)
          bool simple = true;
          for (std::size_t i = 1; i < rnodes.size(); ++i) {
            for (NodeId w : c.nodes)
              if (w == rnodes[i]) simple = false;
            c.nodes.push_back(rnodes[i]);
            c.edge_seq.push_back(redges[i - 1]);
          }
          if (!simple) continue;  // halves may share a node besides x
          c.edge_seq.push_back(eid);  // closes v -> u
          c.canon = canonical_cycle_form(c.edge_seq);
          if (!best || c < *best) best = std::move(c);
        }
        if (enumerated > budget_) break;
      }
      if (enumerated > budget_) break;
    }
    return best;
  }

 private:
  /// All strictly-distance-decreasing paths from x down to root (dist 0),
  /// as (node list x..root, edge list). Deterministic order by edge id.
  void half_paths(NodeId x, NodeId root, const std::vector<std::size_t>& dist,
                  const std::vector<std::uint64_t>& seen, EdgeId skip,
                  std::vector<std::pair<std::vector<NodeId>, std::vector<EdgeId>>>& out) {
    std::vector<NodeId> nodes = {x};
    std::vector<EdgeId> edges;
    dfs_down(x, root, dist, seen, skip, nodes, edges, out);
  }

  void dfs_down(NodeId cur, NodeId root, const std::vector<std::size_t>& dist,
                const std::vector<std::uint64_t>& seen, EdgeId skip, std::vector<NodeId>& nodes,
                std::vector<EdgeId>& edges,
                std::vector<std::pair<std::vector<NodeId>, std::vector<EdgeId>>>& out) {
    if (cur == root) {
      out.emplace_back(nodes, edges);
      return;
    }
    if (out.size() > budget_) return;
    std::vector<std::pair<EdgeId, NodeId>> nexts;
    for (const Incidence& inc : g_.incident(cur)) {
      if (inc.edge == skip || inc.other == kHalf) continue;
      if (seen[inc.other] == stamp_ && dist[inc.other] + 1 == dist[cur])
        nexts.emplace_back(inc.edge, inc.other);
    }
    std::sort(nexts.begin(), nexts.end());
    for (auto [eid, nxt] : nexts) {
      nodes.push_back(nxt);
      edges.push_back(eid);
      dfs_down(nxt, root, dist, seen, skip, nodes, edges, out);
      nodes.pop_back();
      edges.pop_back();
    }
  }

  const Graph& g_;
  std::vector<std::size_t> du_, dv_;
  std::vector<std::uint64_t> su_, sv_;
  std::vector<NodeId> ball_u_, ball_v_;
  std::uint64_t stamp_ = 0;
  std::size_t budget_;
};

/// Orient every edge of the cycle consistently: the smallest-id edge goes
/// from its lower-id endpoint to its higher-id endpoint, the rest follow.
inline void orient_cycle(const FoundCycle& c, const Graph& g, Orientation& o,
                         std::vector<bool>& oriented) {
  std::size_t L = c.edge_seq.size();
  std::size_t imin = 0;
  for (std::size_t i = 1; i < L; ++i)
    if (c.edge_seq[i] < c.edge_seq[imin]) imin = i;
  NodeId a = c.nodes[imin], b = c.nodes[(imin + 1) % L];
  bool forward = a < b;  // traversal order n_i -> n_{i+1} if lower->higher
  for (std::size_t i = 0; i < L; ++i) {
    NodeId tail = forward ? c.nodes[i] : c.nodes[(i + 1) % L];
    EdgeId eid = c.edge_seq[i];
    o.set(g.edge(eid), tail);
    oriented[eid] = true;
  }
}

namespace detail_sinkless {

/// Orient every edge on a minimal short cycle; returns per-edge oriented
/// flags. After the pass, every node incident to a short edge has an
/// outgoing edge (with a deterministic local fix-up for enumeration-budget
/// tie-break escapes, which should not trigger in practice).
inline std::vector<bool> orient_short_cycles(const Graph& g, std::size_t cutoff,
                                             Orientation& o, const SinklessConfig& cfg) {
  std::vector<bool> oriented(g.m(), false);
  ShortCycleFinder finder(g, cfg.cycle_enum_budget);
  std::vector<std::optional<FoundCycle>> min_cycle(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) min_cycle[e] = finder.through(e, cutoff);
  // Each edge takes the direction its own minimal cycle assigns to it.
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!min_cycle[e]) continue;
    const FoundCycle& c = *min_cycle[e];
    // Direction of edge e within its own minimal cycle.
    std::size_t L = c.edge_seq.size();
    std::size_t imin = 0, ie = 0;
    for (std::size_t i = 0; i < L; ++i) {
      if (c.edge_seq[i] < c.edge_seq[imin]) imin = i;
      if (c.edge_seq[i] == e) ie = i;
    }
    NodeId a = c.nodes[imin], b = c.nodes[(imin + 1) % L];
    bool forward = a < b;
    NodeId tail = forward ? c.nodes[ie] : c.nodes[(ie + 1) % L];
    o.set(g.edge(e), tail);
    oriented[e] = true;
  }
  // Fix-up: every node with an oriented incident edge must have out>=1.
  for (NodeId v = 0; v < g.n(); ++v) {
    bool has_any = false, has_out = false;
    for (const Incidence& inc : g.incident(v)) {
      if (inc.other != kHalf && oriented[inc.edge]) {
        has_any = true;
        if (o.from[inc.edge] == v) has_out = true;
      }
    }
    if (!has_any || has_out) continue;
    bool fixed = false;
    for (const Incidence& inc : g.incident(v)) {
      if (inc.other == kHalf || !oriented[inc.edge]) continue;
      NodeId w = inc.other;
      std::size_t out_w = 0;
      for (const Incidence& wi : g.incident(w))
        if (wi.other != kHalf && oriented[wi.edge] && o.from[wi.edge] == w) ++out_w;
      if (out_w >= 2) {
        o.set(g.edge(inc.edge), v);
        fixed = true;
        break;
      }
    }
    if (!fixed)
      throw InvariantViolation("short-cycle orientation left node " + std::to_string(v) +
                               " without an out-edge");
  }
  return oriented;
}

}  // namespace detail_sinkless

// ---------------------------------------------------------------------------
// Deterministic sinkless orientation for min incident count d >= 3.

inline Orientation deterministic_sinkless(const Graph& g, std::size_t d,
                                          RunMetrics* metrics = nullptr,
                                          const SinklessConfig& cfg = {}) {
  if (d < 3) throw ParameterError("deterministic_sinkless needs d >= 3");
  for (NodeId v = 0; v < g.n(); ++v)
    if (g.degree(v) < d)
      throw PreconditionError("node " + std::to_string(v) + " has fewer than d incident items");
  double logd = std::log(static_cast<double>(g.n())) / std::log(static_cast<double>(d - 1));
  std::size_t cutoff = static_cast<std::size_t>(std::floor(2.0 * logd + 1.0));
  cutoff = std::max<std::size_t>(cutoff, 2);
  Orientation o(g.m());
  // Half-edges point away from their owner.
  for (const Edge& e : g.edges())
    if (e.is_half()) o.set(e, e.a);
  std::vector<bool> oriented = detail_sinkless::orient_short_cycles(g, cutoff, o, cfg);
  // Short nodes: on a short cycle or owning a half-edge.
  std::vector<bool> short_node(g.n(), false);
  for (NodeId v = 0; v < g.n(); ++v)
    for (const Incidence& inc : g.incident(v))
      if (inc.other == kHalf || oriented[inc.edge]) short_node[v] = true;
  // Long nodes orient one edge toward the nearest short node.
  std::vector<std::size_t> dist(g.n(), static_cast<std::size_t>(-1));
  std::deque<NodeId> q;
  for (NodeId v = 0; v < g.n(); ++v)
    if (short_node[v]) {
      dist[v] = 0;
      q.push_back(v);
    }
  std::size_t max_long_dist = 0;
  while (!q.empty()) {
    NodeId x = q.front();
    q.pop_front();
    for (const Incidence& inc : g.incident(x)) {
      if (inc.other == kHalf || dist[inc.other] != static_cast<std::size_t>(-1)) continue;
      dist[inc.other] = dist[x] + 1;
      q.push_back(inc.other);
    }
  }
  for (NodeId v = 0; v < g.n(); ++v) {
    if (short_node[v]) continue;
    if (dist[v] == static_cast<std::size_t>(-1))
      throw InvariantViolation("node " + std::to_string(v) +
                               " has no short node in its component");
    max_long_dist = std::max(max_long_dist, dist[v]);
    EdgeId pick = kHalf;
    NodeId to = kHalf;
    for (const Incidence& inc : g.incident(v)) {
      if (inc.other == kHalf || oriented[inc.edge]) continue;
      if (dist[inc.other] + 1 == dist[v] && (to == kHalf || inc.other < to ||
                                             (inc.other == to && inc.edge < pick))) {
        pick = inc.edge;
        to = inc.other;
      }
    }
    if (pick == kHalf)
      throw InvariantViolation("long node " + std::to_string(v) + " has no closer neighbor");
    o.set(g.edge(pick), v);
    oriented[pick] = true;
  }
  // Remaining edges are free; orient lower id -> higher id.
  for (const Edge& e : g.edges())
    if (!e.is_half() && !o.is_set(e.id)) o.set(e, std::min(e.a, e.b));
  if (metrics) {
    std::size_t radius = static_cast<std::size_t>(std::ceil(2.0 * logd)) + 1;
    std::size_t rounds = radius + max_long_dist;
    metrics->add_phase("deterministic", rounds);
    std::size_t full_edges = 0;
    for (const Edge& e : g.edges())
      if (!e.is_half()) ++full_edges;
    metrics->messages += rounds * 2 * full_edges;
  }
  return o;
}

// ---------------------------------------------------------------------------
// Randomized pre-shattering on Delta-regular structures (half-edges allowed).

enum class NodeBadType : std::uint8_t { Good = 0, TypeI = 1, TypeII = 2, TypeIII = 3 };

struct ShatterResult {
  Orientation partial;               // set on oriented edges only
  std::vector<NodeBadType> node_type;
  Graph residual;                    // bad nodes, their unmarked edges + half-edges
  std::vector<NodeId> res_node_to_orig;
  std::vector<EdgeId> res_edge_to_orig;
  std::size_t max_bad_component = 0;
};

inline ShatterResult pre_shatter(const Graph& g, std::uint64_t seed,
                                 RunMetrics* metrics = nullptr) {
  const std::size_t delta = g.max_degree();
  for (NodeId v = 0; v < g.n(); ++v)
    if (g.degree(v) != delta) throw PreconditionError("pre_shatter needs a regular structure");
  ShatterResult r;
  r.partial = Orientation(g.m());
  r.node_type.assign(g.n(), NodeBadType::Good);

  // Round 1: mark each full edge w.p. 1/4 and orient marked edges uniformly.
  std::vector<bool> marked(g.m(), false);
  RngStream rng(seed, 0x73686174ULL);
  for (const Edge& e : g.edges()) {
    if (e.is_half()) {
      r.partial.set(e, e.a);
      continue;
    }
    bool m = rng.bernoulli(0.25);
    bool dir = rng.bernoulli(0.5);
    if (m) {
      marked[e.id] = true;
      r.partial.set(e, dir ? e.a : e.b);
    }
  }
  // Type I: more than delta/2 marked incident edges.
  std::vector<std::size_t> marked_cnt(g.n(), 0);
  for (const Edge& e : g.edges())
    if (!e.is_half() && marked[e.id]) {
      ++marked_cnt[e.a];
      ++marked_cnt[e.b];
    }
  for (NodeId v = 0; v < g.n(); ++v)
    if (2 * marked_cnt[v] > delta) r.node_type[v] = NodeBadType::TypeI;
  // Type II: neighbors of Type I.
  for (const Edge& e : g.edges()) {
    if (e.is_half()) continue;
    if (r.node_type[e.a] == NodeBadType::TypeI && r.node_type[e.b] == NodeBadType::Good)
      r.node_type[e.b] = NodeBadType::TypeII;
    if (r.node_type[e.b] == NodeBadType::TypeI && r.node_type[e.a] == NodeBadType::Good)
      r.node_type[e.a] = NodeBadType::TypeII;
  }
  // Unmark all edges incident to Type I nodes (their orientation is dropped).
  for (const Edge& e : g.edges()) {
    if (e.is_half() || !marked[e.id]) continue;
    if (r.node_type[e.a] == NodeBadType::TypeI || r.node_type[e.b] == NodeBadType::TypeI) {
      marked[e.id] = false;
      r.partial.from[e.id] = kHalf;
      r.partial.to[e.id] = kHalf;
    }
  }
  // Type III: no outgoing marked edge and no half-edge.
  std::vector<bool> has_out(g.n(), false);
  for (const Edge& e : g.edges()) {
    if (e.is_half())
      has_out[e.a] = true;
    else if (marked[e.id])
      has_out[r.partial.from[e.id]] = true;
  }
  for (NodeId v = 0; v < g.n(); ++v)
    if (r.node_type[v] == NodeBadType::Good && !has_out[v]) r.node_type[v] = NodeBadType::TypeIII;

  auto bad = [&](NodeId v) { return r.node_type[v] != NodeBadType::Good; };
  // Unmarked edges: good-good oriented arbitrarily; good-bad become residual
  // half-edges at the bad node; bad-bad go to the residual whole.
  std::vector<NodeId> orig_to_res(g.n(), kHalf);
  for (NodeId v = 0; v < g.n(); ++v) {
    if (bad(v)) {
      orig_to_res[v] = static_cast<NodeId>(r.res_node_to_orig.size());
      r.res_node_to_orig.push_back(v);
    }
  }
  r.residual = Graph(static_cast<NodeId>(r.res_node_to_orig.size()));
  for (const Edge& e : g.edges()) {
    if (e.is_half()) {
      if (bad(e.a)) {
        r.residual.add_half_edge(orig_to_res[e.a]);
        r.res_edge_to_orig.push_back(e.id);
      }
      continue;
    }
    if (marked[e.id]) continue;
    bool ba = bad(e.a), bb = bad(e.b);
    if (!ba && !bb) {
      r.partial.set(e, std::min(e.a, e.b));
    } else if (ba && bb) {
      r.residual.add_edge(orig_to_res[e.a], orig_to_res[e.b]);
      r.res_edge_to_orig.push_back(e.id);
    } else {
      r.residual.add_half_edge(orig_to_res[ba ? e.a : e.b]);
      r.res_edge_to_orig.push_back(e.id);
    }
  }
  for (const auto& comp : r.residual.components())
    r.max_bad_component = std::max(r.max_bad_component, comp.size());
  if (metrics) {
    metrics->add_phase("shatter", 3);  // mark, classify, exchange
    std::size_t full_edges = 0;
    for (const Edge& e : g.edges())
      if (!e.is_half()) ++full_edges;
    metrics->messages += 3 * 2 * full_edges;
    metrics->max_bad_component = std::max(metrics->max_bad_component, r.max_bad_component);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Regularization of min-degree-d graphs into a d-regular half-edge structure.

struct RegularStructure {
  Graph h;
  std::vector<NodeId> copy_to_orig;
  std::vector<EdgeId> h_edge_to_orig;
  std::vector<EdgeId> dropped;  // original ids cut at both endpoints
};

inline RegularStructure regularize(const Graph& g, std::size_t d) {
  if (d < 1) throw ParameterError("regularize needs d >= 1");
  for (NodeId v = 0; v < g.n(); ++v)
    if (g.degree(v) < d) throw PreconditionError("regularize needs min degree >= d");
  // Leftover = last (deg mod d) incident edges by id at each node.
  RegularStructure rs;
  std::vector<std::vector<Incidence>> inc(g.n());
  std::vector<NodeId> first_copy(g.n());
  for (NodeId v = 0; v < g.n(); ++v) {
    inc[v] = g.incident(v);
    std::sort(inc[v].begin(), inc[v].end(),
              [](const Incidence& x, const Incidence& y) { return x.edge < y.edge; });
    first_copy[v] = static_cast<NodeId>(rs.copy_to_orig.size());
    std::size_t copies = g.degree(v) / d;
    for (std::size_t k = 0; k < copies; ++k) rs.copy_to_orig.push_back(v);
  }
  // cut[e][side]: edge is leftover at that endpoint.
  std::vector<bool> cut_a(g.m(), false), cut_b(g.m(), false);
  std::vector<NodeId> copy_a(g.m(), kHalf), copy_b(g.m(), kHalf);
  for (NodeId v = 0; v < g.n(); ++v) {
    std::size_t keep = (g.degree(v) / d) * d;
    for (std::size_t i = 0; i < inc[v].size(); ++i) {
      const Edge& e = g.edge(inc[v][i].edge);
      bool is_a = (e.a == v);
      if (i >= keep) {
        (is_a ? cut_a : cut_b)[e.id] = true;
      } else {
        NodeId copy = first_copy[v] + static_cast<NodeId>(i / d);
        (is_a ? copy_a : copy_b)[e.id] = copy;
      }
    }
  }
  rs.h = Graph(static_cast<NodeId>(rs.copy_to_orig.size()));
  for (const Edge& e : g.edges()) {
    if (e.is_half()) {
      if (cut_a[e.id]) {
        rs.dropped.push_back(e.id);
      } else {
        rs.h.add_half_edge(copy_a[e.id]);
        rs.h_edge_to_orig.push_back(e.id);
      }
      continue;
    }
    if (cut_a[e.id] && cut_b[e.id]) {
      rs.dropped.push_back(e.id);
    } else if (cut_a[e.id]) {
      rs.h.add_half_edge(copy_b[e.id]);
      rs.h_edge_to_orig.push_back(e.id);
    } else if (cut_b[e.id]) {
      rs.h.add_half_edge(copy_a[e.id]);
      rs.h_edge_to_orig.push_back(e.id);
    } else {
      rs.h.add_edge(copy_a[e.id], copy_b[e.id]);
      rs.h_edge_to_orig.push_back(e.id);
    }
  }
  return rs;
}

// ---------------------------------------------------------------------------
// Generic sinkless solver for small structures: roots are half-edge owners or
// one DFS-found cycle (oriented around); everything else points rootward.

inline Orientation sinkless_fallback(const Graph& g) {
  Orientation o(g.m());
  std::vector<bool> rooted(g.n(), false);
  for (const Edge& e : g.edges()) {
    if (e.is_half()) {
      o.set(e, e.a);
      rooted[e.a] = true;
    }
  }
  std::vector<bool> oriented(g.m(), false);
  for (const Edge& e : g.edges())
    if (e.is_half()) oriented[e.id] = true;
  // Per component without a half-edge root: find one cycle, orient it around.
  std::vector<int> comp_of(g.n(), -1);
  auto comps = g.components();
  for (std::size_t ci = 0; ci < comps.size(); ++ci)
    for (NodeId v : comps[ci]) comp_of[v] = static_cast<int>(ci);
  std::vector<bool> comp_rooted(comps.size(), false);
  for (NodeId v = 0; v < g.n(); ++v)
    if (rooted[v]) comp_rooted[comp_of[v]] = true;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (comp_rooted[ci]) continue;
    if (comps[ci].size() == 1 && g.degree(comps[ci][0]) == 0)
      throw InvariantViolation("isolated node cannot be sinkless");
    // DFS keeping the active path; a back edge to an on-path node closes a
    // cycle, which is then oriented consistently around.
    NodeId start = comps[ci][0];
    std::vector<EdgeId> parent_edge(g.n(), kHalf);
    std::vector<NodeId> parent(g.n(), kHalf);
    std::vector<bool> visited(g.n(), false), on_path(g.n(), false);
    std::vector<std::pair<NodeId, std::size_t>> stack;
    stack.emplace_back(start, 0);
    visited[start] = true;
    on_path[start] = true;
    bool found = false;
    while (!stack.empty() && !found) {
      auto& [x, idx] = stack.back();
      const auto incs = g.incident(x);
      if (idx >= incs.size()) {
        on_path[x] = false;
        stack.pop_back();
        continue;
      }
      const Incidence inc = incs[idx++];
      if (inc.other == kHalf || inc.edge == parent_edge[x]) continue;
      if (on_path[inc.other]) {
        // Directed cycle inc.other -> ... -> x -> inc.other.
        o.set(g.edge(inc.edge), x);
        oriented[inc.edge] = true;
        rooted[x] = true;
        NodeId w = x;
        while (w != inc.other) {
          o.set(g.edge(parent_edge[w]), parent[w]);
          oriented[parent_edge[w]] = true;
          rooted[parent[w]] = true;
          w = parent[w];
        }
        found = true;
      } else if (!visited[inc.other]) {
        visited[inc.other] = true;
        on_path[inc.other] = true;
        parent[inc.other] = x;
        parent_edge[inc.other] = inc.edge;
        stack.emplace_back(inc.other, 0);
      }
    }
    if (!found) throw InvariantViolation("component is a tree; sinkless impossible");
  }
  // Every rooted node has out >= 1. BFS from roots; others point rootward.
  std::vector<std::size_t> dist(g.n(), static_cast<std::size_t>(-1));
  std::deque<NodeId> q;
  for (NodeId v = 0; v < g.n(); ++v)
    if (rooted[v]) {
      dist[v] = 0;
      q.push_back(v);
    }
  while (!q.empty()) {
    NodeId x = q.front();
    q.pop_front();
    for (const Incidence& inc : g.incident(x)) {
      if (inc.other == kHalf || dist[inc.other] != static_cast<std::size_t>(-1)) continue;
      dist[inc.other] = dist[x] + 1;
      q.push_back(inc.other);
    }
  }
  for (NodeId v = 0; v < g.n(); ++v) {
    if (rooted[v]) continue;
    for (const Incidence& inc : g.incident(v)) {
      if (inc.other != kHalf && !oriented[inc.edge] && dist[inc.other] + 1 == dist[v]) {
        o.set(g.edge(inc.edge), v);
        oriented[inc.edge] = true;
        break;
      }
    }
  }
  for (const Edge& e : g.edges())
    if (!e.is_half() && !o.is_set(e.id)) o.set(e, std::min(e.a, e.b));
  auto out = o.out_degrees(g);
  for (NodeId v = 0; v < g.n(); ++v)
    if (out[v] == 0) throw InvariantViolation("fallback left a sink at node " + std::to_string(v));
  return o;
}

// ---------------------------------------------------------------------------

struct SubGraph {
  Graph g;
  std::vector<NodeId> node_to_orig;
  std::vector<EdgeId> edge_to_orig;
};

/// Induced structure on the given nodes: edges with both endpoints inside,
/// plus half-edges owned inside. Edges to outside nodes are NOT included.
inline SubGraph induced(const Graph& g, const std::vector<NodeId>& nodes) {
  SubGraph s;
  s.node_to_orig = nodes;
  std::vector<NodeId> to_sub(g.n(), kHalf);
  for (std::size_t i = 0; i < nodes.size(); ++i) to_sub[nodes[i]] = static_cast<NodeId>(i);
  s.g = Graph(static_cast<NodeId>(nodes.size()));
  for (const Edge& e : g.edges()) {
    if (e.is_half()) {
      if (to_sub[e.a] != kHalf) {
        s.g.add_half_edge(to_sub[e.a]);
        s.edge_to_orig.push_back(e.id);
      }
    } else if (to_sub[e.a] != kHalf && to_sub[e.b] != kHalf) {
      s.g.add_edge(to_sub[e.a], to_sub[e.b]);
      s.edge_to_orig.push_back(e.id);
    }
  }
  return s;
}

namespace detail_sinkless {

/// Solve each component independently: the deterministic algorithm where the
/// local minimum incident count allows it, a rootward fallback otherwise.
inline Orientation solve_components(const Graph& g, const SinklessConfig& cfg,
                                    RunMetrics* metrics) {
  Orientation o(g.m());
  std::size_t max_rounds = 0, msgs = 0;
  for (const auto& comp : g.components()) {
    SubGraph sub = induced(g, comp);
    std::size_t dmin = sub.g.n() ? sub.g.min_degree() : 0;
    Orientation so(0);
    RunMetrics mm;
    if (dmin >= 3)
      so = deterministic_sinkless(sub.g, dmin, &mm, cfg);
    else
      so = sinkless_fallback(sub.g);
    max_rounds = std::max(max_rounds, mm.rounds);
    msgs += mm.messages;
    for (EdgeId se = 0; se < sub.g.m(); ++se) {
      const Edge& e = g.edge(sub.edge_to_orig[se]);
      o.set(e, sub.node_to_orig[so.from[se]]);
    }
  }
  if (metrics) {
    metrics->add_phase("residual_solve", max_rounds);
    metrics->messages += msgs;
  }
  return o;
}

}  // namespace detail_sinkless

/// Shattering pipeline on a d-regular structure (half-edges allowed):
/// randomized pre-shattering, then a deterministic solve of the residual.
inline Orientation shatter_regular(const Graph& g, std::uint64_t seed,
                                   const SinklessConfig& cfg = {},
                                   RunMetrics* metrics = nullptr) {
  ShatterResult sr = pre_shatter(g, seed, metrics);
  Orientation o = sr.partial;
  if (sr.residual.n() > 0) {
    Orientation ro = detail_sinkless::solve_components(sr.residual, cfg, metrics);
    for (EdgeId re = 0; re < sr.residual.m(); ++re) {
      const Edge& e = g.edge(sr.res_edge_to_orig[re]);
      o.set(e, sr.res_node_to_orig[ro.from[re]]);
    }
  }
  return o;
}

/// High-degree path: regularize to min-degree copies, shatter, map back.
inline Orientation sinkless_high_degree(const Graph& g, std::size_t d, std::uint64_t seed,
                                        const SinklessConfig& cfg = {},
                                        RunMetrics* metrics = nullptr) {
  RegularStructure rs = regularize(g, d);
  Orientation oh = shatter_regular(rs.h, seed, cfg, metrics);
  Orientation o(g.m());
  for (EdgeId he = 0; he < rs.h.m(); ++he) {
    const Edge& orig = g.edge(rs.h_edge_to_orig[he]);
    o.set(orig, rs.copy_to_orig[oh.from[he]]);
  }
  for (EdgeId e : rs.dropped) {
    const Edge& orig = g.edge(e);
    o.set(orig, orig.is_half() ? orig.a : std::min(orig.a, orig.b));
  }
  return o;
}

// ---------------------------------------------------------------------------
// Low-degree path, 3 <= d <= high_threshold: cover the girth-bounded part
// with short cycles, cluster the rest around a c-independent set, contract,
// solve the contracted multigraph, and expand back.

inline Orientation sinkless_low_degree(const Graph& g, std::size_t d, std::uint64_t seed,
                                       const SinklessConfig& cfg = {},
                                       RunMetrics* metrics = nullptr) {
  if (d < 3) throw ParameterError("sinkless_low_degree needs d >= 3");
  for (NodeId v = 0; v < g.n(); ++v)
    if (g.degree(v) < d) throw PreconditionError("sinkless_low_degree needs min degree >= d");
  // Smallest c with (d-1)^{c/2} above the high-degree threshold.
  std::size_t c = 1;
  while (std::pow(static_cast<double>(d - 1), static_cast<double>(c) / 2.0) <=
         static_cast<double>(cfg.high_threshold))
    ++c;
  const std::size_t cutoff = 3 * c;
  Orientation o(g.m());
  for (const Edge& e : g.edges())
    if (e.is_half()) o.set(e, e.a);
  std::vector<bool> oriented = detail_sinkless::orient_short_cycles(g, cutoff, o, cfg);
  for (const Edge& e : g.edges())
    if (e.is_half()) oriented[e.id] = true;
  if (metrics) {
    metrics->add_phase("short_cycles", cutoff + 1);
    metrics->messages += (cutoff + 1) * 2 * g.m();
  }
  std::vector<bool> satisfied(g.n(), false);
  for (const Edge& e : g.edges()) {
    if (e.is_half()) {
      satisfied[e.a] = true;
    } else if (oriented[e.id]) {
      satisfied[e.a] = true;
      satisfied[e.b] = true;
    }
  }
  std::vector<NodeId> unsat;
  for (NodeId v = 0; v < g.n(); ++v)
    if (!satisfied[v]) unsat.push_back(v);
  if (!unsat.empty()) {
    // Residual structure on unsatisfied nodes; edges into satisfied
    // territory become half-edges owned by the unsatisfied endpoint.
    std::vector<NodeId> to_res(g.n(), kHalf);
    for (std::size_t i = 0; i < unsat.size(); ++i) to_res[unsat[i]] = static_cast<NodeId>(i);
    Graph R(static_cast<NodeId>(unsat.size()));
    std::vector<EdgeId> r_edge_to_orig;
    for (const Edge& e : g.edges()) {
      if (e.is_half() || oriented[e.id]) continue;
      bool ua = to_res[e.a] != kHalf, ub = to_res[e.b] != kHalf;
      if (ua && ub) {
        R.add_edge(to_res[e.a], to_res[e.b]);
        r_edge_to_orig.push_back(e.id);
      } else if (ua || ub) {
        R.add_half_edge(ua ? to_res[e.a] : to_res[e.b]);
        r_edge_to_orig.push_back(e.id);
      }
    }
    // Greedy maximal c-independent set over R (full edges only).
    std::vector<bool> member(R.n(), false);
    std::vector<std::size_t> bdist(R.n());
    std::vector<std::uint64_t> bstamp(R.n(), 0);
    std::uint64_t stamp = 0;
    std::vector<NodeId> bq;
    for (NodeId v = 0; v < R.n(); ++v) {
      ++stamp;
      bq.clear();
      bq.push_back(v);
      bstamp[v] = stamp;
      bdist[v] = 0;
      bool blocked = false;
      for (std::size_t h = 0; h < bq.size() && !blocked; ++h) {
        NodeId x = bq[h];
        if (member[x]) {
          blocked = true;
          break;
        }
        if (bdist[x] == c) continue;
        for (const Incidence& inc : R.incident(x)) {
          if (inc.other == kHalf || bstamp[inc.other] == stamp) continue;
          bstamp[inc.other] = stamp;
          bdist[inc.other] = bdist[x] + 1;
          bq.push_back(inc.other);
        }
      }
      if (!blocked) member[v] = true;
    }
    // Cluster every residual node to its nearest member, ties to the
    // smallest member id; level-synchronous BFS keeps labels consistent.
    std::vector<std::size_t> dist(R.n(), static_cast<std::size_t>(-1));
    std::vector<NodeId> label(R.n(), kHalf);
    std::vector<NodeId> frontier;
    for (NodeId v = 0; v < R.n(); ++v)
      if (member[v]) {
        dist[v] = 0;
        label[v] = v;
        frontier.push_back(v);
      }
    std::size_t level = 0;
    while (!frontier.empty()) {
      std::vector<NodeId> next;
      for (NodeId x : frontier) {
        for (const Incidence& inc : R.incident(x)) {
          if (inc.other == kHalf) continue;
          if (dist[inc.other] == static_cast<std::size_t>(-1)) {
            dist[inc.other] = level + 1;
            label[inc.other] = label[x];
            next.push_back(inc.other);
          } else if (dist[inc.other] == level + 1) {
            label[inc.other] = std::min(label[inc.other], label[x]);
          }
        }
      }
      frontier = std::move(next);
      ++level;
    }
    for (NodeId v = 0; v < R.n(); ++v)
      if (label[v] == kHalf)
        throw InvariantViolation("residual node missed by clustering");
    // Contract clusters to a multigraph; parallel edges stay.
    std::vector<NodeId> cidx(R.n(), kHalf);
    std::vector<NodeId> cluster_member;  // contracted index -> member R id
    for (NodeId v = 0; v < R.n(); ++v)
      if (member[v]) {
        cidx[v] = static_cast<NodeId>(cluster_member.size());
        cluster_member.push_back(v);
      }
    Graph C(static_cast<NodeId>(cluster_member.size()));
    std::vector<EdgeId> c_edge_to_r;
    std::vector<EdgeId> internal;  // R edge ids inside a cluster
    for (const Edge& re : R.edges()) {
      if (re.is_half()) {
        C.add_half_edge(cidx[label[re.a]]);
        c_edge_to_r.push_back(re.id);
      } else if (label[re.a] != label[re.b]) {
        C.add_edge(cidx[label[re.a]], cidx[label[re.b]]);
        c_edge_to_r.push_back(re.id);
      } else {
        internal.push_back(re.id);
      }
    }
    // Solve the contracted structure.
    Orientation co(0);
    RunMetrics cm;
    std::size_t cmin = C.n() ? C.min_degree() : 0;
    if (cmin > cfg.high_threshold)
      co = sinkless_high_degree(C, cmin, seed, cfg, &cm);
    else if (cmin >= 3)
      co = deterministic_sinkless(C, cmin, &cm, cfg);
    else
      co = detail_sinkless::solve_components(C, cfg, &cm);
    if (metrics) metrics->absorb(cm, "contracted");
    // Boundary edges follow the contracted orientation.
    for (EdgeId ce = 0; ce < C.m(); ++ce) {
      const Edge& redge = R.edge(c_edge_to_r[ce]);
      const Edge& oedge = g.edge(r_edge_to_orig[redge.id]);
      NodeId r_tail;
      if (redge.is_half()) {
        r_tail = redge.a;
      } else {
        NodeId tail_cluster = cluster_member[co.from[ce]];
        r_tail = (label[redge.a] == tail_cluster) ? redge.a : redge.b;
      }
      NodeId orig_tail = unsat[r_tail];
      o.set(oedge, orig_tail);
      oriented[oedge.id] = true;
    }
    // Expansion: inside each cluster, point everything toward the exit.
    // The exit of a cluster is the endpoint of its smallest outgoing
    // contracted item; the member always has one since C is sinkless.
    std::vector<NodeId> exit_node(cluster_member.size(), kHalf);
    for (EdgeId ce = 0; ce < C.m(); ++ce) {
      const Edge& cedge = C.edge(ce);
      const Edge& redge = R.edge(c_edge_to_r[ce]);
      NodeId from_cluster = cedge.is_half() ? cedge.a : static_cast<NodeId>(co.from[ce]);
      NodeId r_tail;
      if (redge.is_half())
        r_tail = redge.a;
      else
        r_tail = (label[redge.a] == cluster_member[from_cluster]) ? redge.a : redge.b;
      if (cedge.is_half() || co.from[ce] == from_cluster) {
        if (exit_node[from_cluster] == kHalf) exit_node[from_cluster] = r_tail;
      }
    }
    // BFS per cluster over internal edges from the exit node.
    std::vector<std::vector<Incidence>> int_adj(R.n());
    for (EdgeId ie : internal) {
      const Edge& re = R.edge(ie);
      int_adj[re.a].push_back({ie, re.b});
      int_adj[re.b].push_back({ie, re.a});
    }
    std::vector<bool> seen(R.n(), false);
    for (std::size_t ci = 0; ci < cluster_member.size(); ++ci) {
      NodeId x = exit_node[ci];
      if (x == kHalf)
        throw InvariantViolation("cluster without an outgoing contracted edge");
      std::deque<NodeId> q = {x};
      seen[x] = true;
      while (!q.empty()) {
        NodeId y = q.front();
        q.pop_front();
        for (const Incidence& inc : int_adj[y]) {
          if (seen[inc.other]) continue;
          seen[inc.other] = true;
          const Edge& oedge = g.edge(r_edge_to_orig[inc.edge]);
          o.set(oedge, unsat[inc.other]);  // child points toward the exit
          oriented[oedge.id] = true;
          q.push_back(inc.other);
        }
      }
    }
    if (metrics) {
      metrics->add_phase("cluster", 3 * c);
      metrics->add_phase("expand", c);
      metrics->messages += 4 * static_cast<std::size_t>(c) * 2 * g.m();
    }
  }
  for (const Edge& e : g.edges())
    if (!e.is_half() && !o.is_set(e.id)) o.set(e, std::min(e.a, e.b));
  return o;
}

// ---------------------------------------------------------------------------

inline Orientation sinkless_dispatch(const Graph& g, std::uint64_t seed,
                                     const SinklessConfig& cfg = {},
                                     RunMetrics* metrics = nullptr) {
  if (g.n() == 0) return Orientation(0);
  std::size_t d = g.min_degree();
  if (d < 3) throw PreconditionError("sinkless orientation needs min degree >= 3");
  // Fast path: with high degree a uniformly random orientation has no sink
  // w.h.p.; verify and fall through on the unlucky draw.
  if (static_cast<double>(d) >= cfg.fast_c1 * std::log(static_cast<double>(std::max<NodeId>(g.n(), 2)))) {
    Orientation o(g.m());
    RngStream rng(seed, 0x66617374ULL);
    for (const Edge& e : g.edges()) {
      if (e.is_half())
        o.set(e, e.a);
      else
        o.set(e, rng.bernoulli(0.5) ? e.a : e.b);
    }
    if (check_sinkless(g, o).ok()) {
      if (metrics) {
        metrics->add_phase("fast_random", 1);
        metrics->messages += 2 * g.m();
      }
      return o;
    }
  }
  Orientation o(0);
  if (d > cfg.high_threshold)
    o = sinkless_high_degree(g, d, seed, cfg, metrics);
  else
    o = sinkless_low_degree(g, d, seed, cfg, metrics);
  return o;
}

}  // namespace degsplit
