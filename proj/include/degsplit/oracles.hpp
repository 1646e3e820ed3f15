#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "degsplit/assignments.hpp"
#include "degsplit/graph.hpp"

namespace degsplit {

// ---------------------------------------------------------------------------
// Validation reports: each check records pass/fail plus a witness string.

struct CheckResult {
  std::string name;
  bool pass;
  std::string witness;  // empty when passing
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void add(std::string name, bool pass, std::string witness = "") {
    checks.push_back({std::move(name), pass, pass ? "" : std::move(witness)});
  }

  std::string summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << (c.pass ? "pass " : "FAIL ") << c.name;
      if (!c.pass) os << ": " << c.witness;
      os << "\n";
    }
    return os.str();
  }
};

/// Every node has out-degree >= 1 (half-edges count as outgoing).
inline ValidationReport check_sinkless(const Graph& g, const Orientation& o) {
  ValidationReport r;
  std::vector<std::size_t> out = o.out_degrees(g);
  for (NodeId v = 0; v < g.n(); ++v) {
    if (out[v] == 0) {
      r.add("sinkless", false, "node " + std::to_string(v) + " has out-degree 0");
      return r;
    }
  }
  r.add("sinkless", true);
  return r;
}

/// out <= max_out and in <= max_in at every node.
inline ValidationReport check_in_out_bounds(const Graph& g, const Orientation& o,
                                            std::size_t max_out, std::size_t max_in) {
  ValidationReport r;
  std::vector<std::size_t> out = o.out_degrees(g);
  std::vector<std::size_t> in = o.in_degrees(g);
  for (NodeId v = 0; v < g.n(); ++v) {
    if (out[v] > max_out) {
      r.add("out_degree_bound", false,
            "node " + std::to_string(v) + " out-degree " + std::to_string(out[v]) + " > " +
                std::to_string(max_out));
      return r;
    }
    if (in[v] > max_in) {
      r.add("in_degree_bound", false,
            "node " + std::to_string(v) + " in-degree " + std::to_string(in[v]) + " > " +
                std::to_string(max_in));
      return r;
    }
  }
  r.add("in_out_bounds", true);
  return r;
}

/// Every node has <= t edges of each color.
inline ValidationReport check_balance(const Graph& g, const TwoColoring& c, std::size_t t) {
  ValidationReport r;
  TwoColoring fresh = c;
  fresh.recount(g);
  for (NodeId v = 0; v < g.n(); ++v) {
    if (fresh.red_deg[v] > t || fresh.blue_deg[v] > t) {
      r.add("balance", false,
            "node " + std::to_string(v) + " has (" + std::to_string(fresh.red_deg[v]) + " red, " +
                std::to_string(fresh.blue_deg[v]) + " blue) > t=" + std::to_string(t));
      return r;
    }
  }
  r.add("balance", true);
  return r;
}

/// No two edges sharing a node have equal color; colors < palette_size.
inline ValidationReport check_proper(const Graph& g, const PaletteColoring& p) {
  ValidationReport r;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (p.color[e] >= p.palette_size) {
      r.add("palette_range", false, "edge " + std::to_string(e) + " color out of palette");
      return r;
    }
  }
  for (NodeId v = 0; v < g.n(); ++v) {
    std::vector<std::uint32_t> seen;
    for (const Incidence& inc : g.incident(v)) seen.push_back(p.color[inc.edge]);
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i) {
      if (seen[i] == seen[i - 1]) {
        r.add("proper", false,
              "node " + std::to_string(v) + " sees color " + std::to_string(seen[i]) + " twice");
        return r;
      }
    }
  }
  r.add("proper", true);
  return r;
}

/// Every edge in exactly one forest; each forest acyclic; star-flagged
/// forests have diameter <= 2 components.
inline ValidationReport check_forests(const Graph& g, const ForestDecomposition& f) {
  ValidationReport r;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (f.forest_of[e] >= f.forests) {
      r.add("forest_range", false, "edge " + std::to_string(e) + " forest index out of range");
      return r;
    }
  }
  std::vector<std::vector<EdgeId>> by_forest(f.forests);
  for (EdgeId e = 0; e < g.m(); ++e) by_forest[f.forest_of[e]].push_back(e);
  for (std::size_t k = 0; k < f.forests; ++k) {
    // Acyclicity via union-find over this forest's edges.
    std::vector<NodeId> parent(g.n());
    for (NodeId v = 0; v < g.n(); ++v) parent[v] = v;
    std::function<NodeId(NodeId)> find = [&](NodeId v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    std::vector<std::size_t> fdeg(g.n(), 0);
    for (EdgeId e : by_forest[k]) {
      const Edge& ed = g.edge(e);
      if (ed.is_half()) continue;
      ++fdeg[ed.a];
      ++fdeg[ed.b];
      NodeId ra = find(ed.a), rb = find(ed.b);
      if (ra == rb) {
        r.add("forest_acyclic", false,
              "forest " + std::to_string(k) + " has a cycle through edge " + std::to_string(e));
        return r;
      }
      parent[ra] = rb;
    }
    if (k < f.star_flag.size() && f.star_flag[k]) {
      // Star components: at most one node of degree > 1 per component, and
      // no path of length > 2 (i.e. every edge touches the center).
      std::vector<std::vector<NodeId>> nbr(g.n());
      for (EdgeId e : by_forest[k]) {
        const Edge& ed = g.edge(e);
        if (ed.is_half()) continue;
        nbr[ed.a].push_back(ed.b);
        nbr[ed.b].push_back(ed.a);
      }
      for (NodeId v = 0; v < g.n(); ++v) {
        if (nbr[v].size() <= 1) continue;
        for (NodeId u : nbr[v]) {
          if (nbr[u].size() > 1) {
            r.add("forest_star", false,
                  "forest " + std::to_string(k) + " has adjacent branch nodes " +
                      std::to_string(v) + "," + std::to_string(u));
            return r;
          }
        }
      }
    }
  }
  r.add("forests", true);
  return r;
}

// ---------------------------------------------------------------------------
// Dinic max-flow on small networks (oracle plumbing; no external solver).

class Dinic {
 public:
  explicit Dinic(int n) : head_(n, -1), level_(n), it_(n) {}

  int add_arc(int u, int v, long long cap) {
    int id = static_cast<int>(to_.size());
    to_.push_back(v);
    cap_.push_back(cap);
    next_.push_back(head_[u]);
    head_[u] = id;
    to_.push_back(u);
    cap_.push_back(0);
    next_.push_back(head_[v]);
    head_[v] = id + 1;
    return id;
  }

  long long max_flow(int s, int t) {
    long long flow = 0;
    while (bfs(s, t)) {
      it_ = head_;
      long long f;
      while ((f = dfs(s, t, std::numeric_limits<long long>::max())) > 0) flow += f;
    }
    return flow;
  }

  /// Source-side nodes of the final min cut (call after max_flow).
  std::vector<bool> min_cut_side(int s) {
    std::vector<bool> side(head_.size(), false);
    std::queue<int> q;
    q.push(s);
    side[s] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e = head_[u]; e >= 0; e = next_[e]) {
        if (cap_[e] > 0 && !side[to_[e]]) {
          side[to_[e]] = true;
          q.push(to_[e]);
        }
      }
    }
    return side;
  }

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e = head_[u]; e >= 0; e = next_[e]) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          q.push(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  long long dfs(int u, int t, long long lim) {
    if (u == t) return lim;
    for (int& e = it_[u]; e >= 0; e = next_[e]) {
      int v = to_[e];
      if (cap_[e] > 0 && level_[v] == level_[u] + 1) {
        long long f = dfs(v, t, std::min(lim, cap_[e]));
        if (f > 0) {
          cap_[e] -= f;
          cap_[e ^ 1] += f;
          return f;
        }
      }
    }
    return 0;
  }

  std::vector<int> head_, to_, next_, it_;
  std::vector<long long> cap_;
  std::vector<int> level_;
};

// ---------------------------------------------------------------------------
// Exact minimum possible maximum out-degree, via flow feasibility.
// Equals max over subgraphs H of ceil(|E(H)| / |V(H)|).

inline std::size_t min_max_outdegree_exact(const Graph& g, std::size_t node_cap = 2000) {
  if (g.n() > node_cap) throw ParameterError("min_max_outdegree_exact: graph exceeds node cap");
  if (g.m() == 0) return 0;
  // Half-edges are forced outward: they consume out-capacity unconditionally.
  std::vector<std::size_t> half(g.n(), 0);
  std::vector<EdgeId> full;
  for (const Edge& e : g.edges()) {
    if (e.is_half())
      ++half[e.a];
    else
      full.push_back(e.id);
  }
  std::size_t max_half = *std::max_element(half.begin(), half.end());
  auto feasible = [&](std::size_t d) {
    if (d < max_half) return false;
    int S = 0, T = 1;
    int base_e = 2, base_v = 2 + static_cast<int>(full.size());
    Dinic net(base_v + static_cast<int>(g.n()));
    for (std::size_t i = 0; i < full.size(); ++i) {
      const Edge& e = g.edge(full[i]);
      net.add_arc(S, base_e + static_cast<int>(i), 1);
      net.add_arc(base_e + static_cast<int>(i), base_v + static_cast<int>(e.a), 1);
      net.add_arc(base_e + static_cast<int>(i), base_v + static_cast<int>(e.b), 1);
    }
    for (NodeId v = 0; v < g.n(); ++v)
      net.add_arc(base_v + static_cast<int>(v), T, static_cast<long long>(d - half[v]));
    return net.max_flow(S, T) == static_cast<long long>(full.size());
  };
  std::size_t lo = std::max<std::size_t>(max_half, (full.size() + g.n() - 1) / g.n());
  std::size_t hi = g.max_degree();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  if (!feasible(lo)) throw InvariantViolation("min_max_outdegree_exact: no feasible bound");
  return lo;
}

// ---------------------------------------------------------------------------
// Exact arboricity, max over subgraphs H of ceil(|E(H)| / (|V(H)| - 1)).
// Violation test for integer a: exists S with E(S) - a*(|S|-1) >= 1, found by
// a project-selection min cut anchored at a node forced into S. A negative
// anchored test means no violating set contains the anchor, so the anchor is
// deleted for the remaining tests.

inline std::size_t arboricity_exact_small(const Graph& g, std::size_t node_cap = 500) {
  if (g.n() > node_cap) throw ParameterError("arboricity_exact_small: graph exceeds node cap");
  if (g.m() == 0) return 0;
  for (const Edge& e : g.edges())
    if (e.is_half()) throw ParameterError("arboricity_exact_small: half-edges unsupported");

  auto has_violation = [&](long long a) {
    std::vector<bool> alive(g.n(), true);
    for (NodeId anchor = 0; anchor < g.n(); ++anchor) {
      if (!alive[anchor]) continue;
      std::vector<EdgeId> live_edges;
      for (const Edge& e : g.edges())
        if (alive[e.a] && alive[e.b]) live_edges.push_back(e.id);
      if (live_edges.empty()) return false;
      int S = 0, T = 1;
      int base_e = 2, base_v = 2 + static_cast<int>(live_edges.size());
      Dinic net(base_v + static_cast<int>(g.n()));
      const long long INF = 1LL << 40;
      for (std::size_t i = 0; i < live_edges.size(); ++i) {
        const Edge& e = g.edge(live_edges[i]);
        net.add_arc(S, base_e + static_cast<int>(i), 1);
        net.add_arc(base_e + static_cast<int>(i), base_v + static_cast<int>(e.a), INF);
        net.add_arc(base_e + static_cast<int>(i), base_v + static_cast<int>(e.b), INF);
      }
      for (NodeId v = 0; v < g.n(); ++v) {
        if (!alive[v] || v == anchor) continue;  // anchor is free: forced into S
        net.add_arc(base_v + static_cast<int>(v), T, a);
      }
      long long cut = net.max_flow(S, T);
      // max over S containing anchor of E(S) - a*(|S|-1)
      long long best = static_cast<long long>(live_edges.size()) - cut;
      if (best >= 1) return true;
      alive[anchor] = false;
    }
    return false;
  };

  std::size_t lo = 1, hi = g.max_degree();
  // Density lower bound for the full graph.
  if (g.n() >= 2)
    lo = std::max<std::size_t>(lo, (g.m() + g.n() - 2) / (g.n() - 1));
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (has_violation(static_cast<long long>(mid)))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Sequential Euler-tour split: per-color degree <= floor(Delta/2) + 1.
// Odd-degree nodes get a parity edge to a virtual dummy node; half-edges also
// attach to the dummy. Tours start at the smallest node id of each component
// of the augmented graph and alternate Red/Blue.

inline TwoColoring euler_split(const Graph& g) {
  TwoColoring col(g, EdgeColor::Red);
  if (g.m() == 0) return col;
  const int dummy = static_cast<int>(g.n());
  struct Arc {
    int to;
    EdgeId edge;    // original edge id, or kNoEdge for parity edges
    bool is_real;
  };
  std::vector<std::vector<int>> inc(g.n() + 1);  // indices into arcs (paired)
  std::vector<Arc> arcs;
  auto add = [&](int u, int v, EdgeId e, bool real) {
    inc[u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, e, real});
    inc[v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, e, real});
  };
  std::vector<std::size_t> deg(g.n() + 1, 0);
  for (const Edge& e : g.edges()) {
    if (e.is_half()) {
      add(static_cast<int>(e.a), dummy, e.id, true);
      ++deg[e.a];
      ++deg[dummy];
    } else {
      add(static_cast<int>(e.a), static_cast<int>(e.b), e.id, true);
      ++deg[e.a];
      ++deg[e.b];
    }
  }
  for (NodeId v = 0; v < g.n(); ++v) {
    if (deg[v] % 2 == 1) {
      add(static_cast<int>(v), dummy, kHalf, false);
      ++deg[dummy];
    }
  }
  // All real nodes are now even, so the dummy is even too (degree sum parity).
  std::vector<bool> used_edge(arcs.size() / 2, false);
  std::vector<std::size_t> ptr(g.n() + 1, 0);
  // The dummy component is toured first, starting AT the dummy: a closed tour
  // of odd length leaves its +1 color imbalance on the start node, and the
  // dummy's colors are discarded. Other components start at smallest node id.
  std::vector<int> starts = {dummy};
  for (int v = 0; v < static_cast<int>(g.n()); ++v) starts.push_back(v);
  for (int start : starts) {
    bool any_unused = false;
    for (int a : inc[start])
      if (!used_edge[a >> 1]) any_unused = true;
    if (!any_unused) continue;
    // Hierholzer from `start`: stack of (node, arc that entered it).
    std::vector<std::pair<int, int>> stack = {{start, -1}};
    std::vector<int> tour;  // tour arcs, reversed
    while (!stack.empty()) {
      auto [v, via] = stack.back();
      bool advanced = false;
      while (ptr[v] < inc[v].size()) {
        int a = inc[v][ptr[v]++];
        if (used_edge[a >> 1]) continue;
        used_edge[a >> 1] = true;
        stack.push_back({arcs[a].to, a});
        advanced = true;
        break;
      }
      if (!advanced) {
        if (via >= 0) tour.push_back(via);
        stack.pop_back();
      }
    }
    // Alternate colors along the closed tour.
    EdgeColor c = EdgeColor::Red;
    for (int a : tour) {
      if (arcs[a].is_real) col.set(g.edge(arcs[a].edge), c);
      c = opposite(c);
    }
  }
  return col;
}

}  // namespace degsplit
