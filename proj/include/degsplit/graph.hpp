#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "degsplit/errors.hpp"
#include "degsplit/rng.hpp"

namespace degsplit {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Sentinel endpoint for half-edges (edges with a single real endpoint).
inline constexpr NodeId kHalf = static_cast<NodeId>(-1);

struct Edge {
  EdgeId id;
  NodeId a;
  NodeId b;  // kHalf for half-edges
  bool is_half() const { return b == kHalf; }
  NodeId other(NodeId v) const { return v == a ? b : a; }
};

struct Incidence {
  EdgeId edge;
  NodeId other;  // kHalf for half-edges
};

/// Undirected multigraph with dense node ids [0, n) and edge ids [0, m).
/// Parallel edges and half-edges are allowed; self-loops are rejected.
class Graph {
 public:
  Graph() = default;
  explicit Graph(NodeId n) : n_(n), adj_(n) {}

  NodeId n() const { return n_; }
  EdgeId m() const { return static_cast<EdgeId>(edges_.size()); }

  EdgeId add_edge(NodeId u, NodeId v) {
    if (u >= n_ || v >= n_) throw ParameterError("edge endpoint out of range");
    if (u == v) throw ParameterError("self-loops are not allowed");
    EdgeId id = m();
    edges_.push_back({id, u, v});
    adj_[u].push_back({id, v});
    adj_[v].push_back({id, u});
    return id;
  }

  EdgeId add_half_edge(NodeId u) {
    if (u >= n_) throw ParameterError("half-edge endpoint out of range");
    EdgeId id = m();
    edges_.push_back({id, u, kHalf});
    adj_[u].push_back({id, kHalf});
    return id;
  }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Incidence>& incident(NodeId v) const { return adj_[v]; }

  /// Incident count, half-edges included.
  std::size_t degree(NodeId v) const { return adj_[v].size(); }

  std::size_t min_degree() const {
    std::size_t d = adj_.empty() ? 0 : adj_[0].size();
    for (NodeId v = 1; v < n_; ++v) d = std::min(d, adj_[v].size());
    return d;
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (NodeId v = 0; v < n_; ++v) d = std::max(d, adj_[v].size());
    return d;
  }

  bool has_half_edges() const {
    for (const Edge& e : edges_)
      if (e.is_half()) return true;
    return false;
  }

  /// Consistency audit: adjacency matches the edge list exactly.
  void audit() const {
    std::vector<std::size_t> seen(edges_.size(), 0);
    for (NodeId v = 0; v < n_; ++v) {
      for (const Incidence& inc : adj_[v]) {
        const Edge& e = edges_[inc.edge];
        if (e.a != v && e.b != v) throw InvariantViolation("adjacency lists stray edge");
        if (inc.other != e.other(v)) throw InvariantViolation("adjacency endpoint mismatch");
        ++seen[inc.edge];
      }
    }
    for (const Edge& e : edges_) {
      std::size_t want = e.is_half() ? 1 : 2;
      if (seen[e.id] != want) throw InvariantViolation("edge multiplicity mismatch");
    }
  }

  /// Connected components over full edges and, trivially, half-edge owners.
  std::vector<std::vector<NodeId>> components() const {
    std::vector<int> comp(n_, -1);
    std::vector<std::vector<NodeId>> out;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n_; ++s) {
      if (comp[s] >= 0) continue;
      int c = static_cast<int>(out.size());
      out.emplace_back();
      comp[s] = c;
      stack.push_back(s);
      while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        out[c].push_back(v);
        for (const Incidence& inc : adj_[v]) {
          if (inc.other != kHalf && comp[inc.other] < 0) {
            comp[inc.other] = c;
            stack.push_back(inc.other);
          }
        }
      }
      std::sort(out[c].begin(), out[c].end());
    }
    return out;
  }

 private:
  NodeId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adj_;
};

// ---------------------------------------------------------------------------
// Generators. All randomness flows through seeded RngStream, so identical
// (family, params, seed) yield identical graphs on every platform.

inline Graph make_cycle(NodeId n) {
  if (n < 3) throw ParameterError("cycle needs n >= 3");
  Graph g(n);
  for (NodeId v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

inline Graph make_clique(NodeId n) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline Graph make_tree(NodeId n, std::uint64_t seed) {
  Graph g(n);
  if (n < 2) return g;
  RngStream rng(seed, 0x7265657ULL);
  if (n == 2) {
    g.add_edge(0, 1);
    return g;
  }
  // Uniform labeled tree via a random Pruefer sequence.
  std::vector<NodeId> prue(n - 2);
  for (auto& x : prue) x = static_cast<NodeId>(rng.below(n));
  std::vector<int> deg(n, 1);
  for (NodeId x : prue) ++deg[x];
  std::set<NodeId> leaves;
  for (NodeId v = 0; v < n; ++v)
    if (deg[v] == 1) leaves.insert(v);
  for (NodeId x : prue) {
    NodeId leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    g.add_edge(leaf, x);
    if (--deg[x] == 1) leaves.insert(x);
  }
  NodeId u = *leaves.begin();
  NodeId v = *std::next(leaves.begin());
  g.add_edge(u, v);
  return g;
}

/// Union of `a` independent uniform spanning trees; arboricity <= a by
/// construction (parallel edges across trees are kept).
inline Graph make_forest_union(NodeId n, int a, std::uint64_t seed) {
  if (a < 1) throw ParameterError("forest_union needs a >= 1");
  Graph g(n);
  for (int i = 0; i < a; ++i) {
    Graph t = make_tree(n, key_combine(seed, static_cast<std::uint64_t>(i) + 1));
    for (const Edge& e : t.edges()) g.add_edge(e.a, e.b);
  }
  return g;
}

inline Graph make_gnp(NodeId n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw ParameterError("gnp needs p in [0,1]");
  Graph g(n);
  RngStream rng(seed, 0x676e70ULL);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

/// Random delta-regular simple graph: configuration model, then seeded pair
/// swaps repairing self-loops and parallel edges, bounded retries.
inline Graph make_regular(NodeId n, int delta, std::uint64_t seed) {
  if (delta < 0 || static_cast<NodeId>(delta) >= n)
    throw ParameterError("regular needs 0 <= delta < n");
  if ((static_cast<std::uint64_t>(n) * delta) % 2 != 0)
    throw ParameterError("regular needs n*delta even");
  RngStream rng(seed, 0x726567ULL);
  const std::size_t mm = static_cast<std::size_t>(n) * delta / 2;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<NodeId> stubs;
    stubs.reserve(2 * mm);
    for (NodeId v = 0; v < n; ++v)
      for (int k = 0; k < delta; ++k) stubs.push_back(v);
    rng.shuffle(stubs);
    auto pack = [](NodeId u, NodeId v) {
      if (u > v) std::swap(u, v);
      return (static_cast<std::uint64_t>(u) << 32) | v;
    };
    auto pair_at = [&](std::size_t i) {
      return std::pair<NodeId, NodeId>{stubs[2 * i], stubs[2 * i + 1]};
    };
    std::map<std::uint64_t, int> cnt;
    for (std::size_t i = 0; i < mm; ++i) {
      auto [u, v] = pair_at(i);
      if (u != v) ++cnt[pack(u, v)];
    }
    auto bad = [&](std::size_t i) {
      auto [u, v] = pair_at(i);
      if (u == v) return true;
      auto it = cnt.find(pack(u, v));
      return it != cnt.end() && it->second > 1;
    };
    // Repair pass: swap one stub of each offending pair with a random stub.
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < mm; ++i)
      if (bad(i)) work.push_back(i);
    std::size_t repairs = 0;
    const std::size_t repair_budget = 200 * mm + 1000;
    bool ok = true;
    while (!work.empty()) {
      std::size_t i = work.back();
      if (!bad(i)) {
        work.pop_back();
        continue;
      }
      if (++repairs > repair_budget) {
        ok = false;
        break;
      }
      std::size_t j = static_cast<std::size_t>(rng.below(2 * mm));
      if (j / 2 == i) continue;
      auto drop = [&](std::size_t p) {
        auto [u, v] = pair_at(p);
        if (u == v) return;
        auto it = cnt.find(pack(u, v));
        if (--it->second == 0) cnt.erase(it);
      };
      auto add = [&](std::size_t p) {
        auto [u, v] = pair_at(p);
        if (u != v) ++cnt[pack(u, v)];
      };
      drop(i);
      drop(j / 2);
      std::swap(stubs[2 * i + 1], stubs[j]);
      add(i);
      add(j / 2);
      work.push_back(j / 2);
    }
    if (!ok) continue;
    for (std::size_t i = 0; i < mm && ok; ++i) ok = !bad(i);
    if (!ok) continue;
    Graph g(n);
    for (std::size_t i = 0; i < mm; ++i) {
      auto [u, v] = pair_at(i);
      g.add_edge(u, v);
    }
    return g;
  }
  throw BudgetExceeded("regular generator failed to produce a simple graph");
}

// ---------------------------------------------------------------------------
// Virtualization: split each node into copies of incident-degree <= d.

struct VirtualizationMap {
  std::vector<NodeId> copy_to_original;           // by copy node id
  std::vector<std::vector<NodeId>> original_copies;  // by original node id
};

/// Each node becomes max(1, ceil(deg/d)) copies; incident edges (ascending
/// edge id) are chunked d at a time. Edge ids are preserved.
inline std::pair<Graph, VirtualizationMap> virtualize(const Graph& g, std::size_t d) {
  if (d == 0) throw ParameterError("virtualize needs d >= 1");
  VirtualizationMap vm;
  vm.original_copies.resize(g.n());
  for (NodeId v = 0; v < g.n(); ++v) {
    std::size_t copies = std::max<std::size_t>(1, (g.degree(v) + d - 1) / d);
    for (std::size_t k = 0; k < copies; ++k) {
      vm.original_copies[v].push_back(static_cast<NodeId>(vm.copy_to_original.size()));
      vm.copy_to_original.push_back(v);
    }
  }
  // Endpoint copy for each (edge, side).
  std::vector<NodeId> copy_a(g.m()), copy_b(g.m());
  for (NodeId v = 0; v < g.n(); ++v) {
    std::vector<Incidence> inc(g.incident(v).begin(), g.incident(v).end());
    std::sort(inc.begin(), inc.end(),
              [](const Incidence& x, const Incidence& y) { return x.edge < y.edge; });
    for (std::size_t i = 0; i < inc.size(); ++i) {
      NodeId copy = vm.original_copies[v][i / d];
      const Edge& e = g.edge(inc[i].edge);
      if (e.a == v)
        copy_a[e.id] = copy;
      else
        copy_b[e.id] = copy;
    }
  }
  Graph h(static_cast<NodeId>(vm.copy_to_original.size()));
  for (const Edge& e : g.edges()) {
    if (e.is_half()) {
      EdgeId id = h.add_half_edge(copy_a[e.id]);
      if (id != e.id) throw InvariantViolation("virtualize edge id drift");
    } else {
      EdgeId id = h.add_edge(copy_a[e.id], copy_b[e.id]);
      if (id != e.id) throw InvariantViolation("virtualize edge id drift");
    }
  }
  return {std::move(h), std::move(vm)};
}

}  // namespace degsplit
