#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "degsplit/errors.hpp"
#include "degsplit/graph.hpp"

namespace degsplit {

/// Direction per edge id. Half-edges carry (owner, kHalf), i.e. point away.
struct Orientation {
  std::vector<NodeId> from;
  std::vector<NodeId> to;

  Orientation() = default;
  explicit Orientation(EdgeId m) : from(m, kHalf), to(m, kHalf) {}

  void set(const Edge& e, NodeId tail) {
    if (e.is_half()) {
      if (tail != e.a) throw ParameterError("half-edge must point away from its owner");
      from[e.id] = e.a;
      to[e.id] = kHalf;
      return;
    }
    if (tail != e.a && tail != e.b) throw ParameterError("tail is not an endpoint");
    from[e.id] = tail;
    to[e.id] = e.other(tail);
  }

  bool is_set(EdgeId e) const { return from[e] != kHalf; }

  void flip(EdgeId e) {
    if (to[e] == kHalf) throw ParameterError("cannot flip a half-edge");
    std::swap(from[e], to[e]);
  }

  std::vector<std::size_t> out_degrees(const Graph& g) const {
    std::vector<std::size_t> out(g.n(), 0);
    for (const Edge& e : g.edges()) {
      if (!is_set(e.id)) throw IncompleteAssignment("orientation misses edge " + std::to_string(e.id));
      ++out[from[e.id]];
    }
    return out;
  }

  std::vector<std::size_t> in_degrees(const Graph& g) const {
    std::vector<std::size_t> in(g.n(), 0);
    for (const Edge& e : g.edges())
      if (to[e.id] != kHalf) ++in[to[e.id]];
    return in;
  }
};

enum class EdgeColor : std::uint8_t { Red, Blue };

inline EdgeColor opposite(EdgeColor c) {
  return c == EdgeColor::Red ? EdgeColor::Blue : EdgeColor::Red;
}

/// Red/Blue assignment with per-node color-degree ledger kept in sync.
struct TwoColoring {
  std::vector<EdgeColor> color;           // by edge id
  std::vector<std::uint32_t> red_deg;     // by node id
  std::vector<std::uint32_t> blue_deg;

  TwoColoring() = default;
  TwoColoring(const Graph& g, EdgeColor init) { reset(g, init); }

  void reset(const Graph& g, EdgeColor init) {
    color.assign(g.m(), init);
    recount(g);
  }

  void recount(const Graph& g) {
    red_deg.assign(g.n(), 0);
    blue_deg.assign(g.n(), 0);
    for (const Edge& e : g.edges()) bump(e, color[e.id], +1);
  }

  void set(const Edge& e, EdgeColor c) {
    if (color[e.id] != c) {
      bump(e, color[e.id], -1);
      color[e.id] = c;
      bump(e, c, +1);
    }
  }

  void flip(const Edge& e) { set(e, opposite(color[e.id])); }

  std::uint32_t deg(NodeId v, EdgeColor c) const {
    return c == EdgeColor::Red ? red_deg[v] : blue_deg[v];
  }

 private:
  void bump(const Edge& e, EdgeColor c, int d) {
    auto& arr = (c == EdgeColor::Red) ? red_deg : blue_deg;
    arr[e.a] = static_cast<std::uint32_t>(arr[e.a] + d);
    if (!e.is_half()) arr[e.b] = static_cast<std::uint32_t>(arr[e.b] + d);
  }
};

/// Proper edge coloring with colors in [0, palette_size).
struct PaletteColoring {
  std::size_t palette_size = 0;
  std::vector<std::uint32_t> color;  // by edge id
};

/// Partition of edges into forests; star_flag marks diameter<=2 forests.
struct ForestDecomposition {
  std::size_t forests = 0;
  std::vector<std::uint32_t> forest_of;  // by edge id
  std::vector<bool> star_flag;           // by forest index
};

}  // namespace degsplit
