#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "degsplit/assignments.hpp"
#include "degsplit/errors.hpp"
#include "degsplit/graph.hpp"
#include "degsplit/local_sim.hpp"
#include "degsplit/oracles.hpp"
#include "degsplit/rng.hpp"
#include "degsplit/split_undirected.hpp"

namespace degsplit {

struct ColorConfig {
  /// Recursion-stop override for fine_color; 0 uses the formula value.
  std::size_t fine_threshold_override = 0;
  /// Subgraph-count override for randomized_color; 0 uses the formula value.
  std::size_t x_override = 0;
  /// Bad-component size cap for randomized_color; 0 means n (never fires).
  std::size_t bad_component_cap = 0;
  SplitConfig split;
};

/// Greedy first-fit proper coloring over ascending edge ids; always fits in
/// 2*Delta - 1 colors since an edge sees at most 2*Delta - 2 neighbors.
inline PaletteColoring base_color(const Graph& g) {
  PaletteColoring pc;
  const std::size_t delta = g.n() ? g.max_degree() : 0;
  pc.palette_size = delta == 0 ? 0 : 2 * delta - 1;
  pc.color.assign(g.m(), 0);
  const std::size_t words = (pc.palette_size + 63) / 64;
  std::vector<std::uint64_t> mask(static_cast<std::size_t>(g.n()) * words, 0);
  auto take = [&](NodeId v, std::size_t c) { mask[v * words + c / 64] |= 1ull << (c % 64); };
  for (const Edge& e : g.edges()) {
    std::size_t c = pc.palette_size;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t m = mask[e.a * words + w];
      if (!e.is_half()) m |= mask[e.b * words + w];
      if (~m) {
        std::size_t bit = static_cast<std::size_t>(__builtin_ctzll(~m));
        if (w * 64 + bit < pc.palette_size) {
          c = w * 64 + bit;
          break;
        }
      }
    }
    if (c >= pc.palette_size)
      throw InvariantViolation("greedy coloring ran out of palette at edge " +
                               std::to_string(e.id));
    pc.color[e.id] = static_cast<std::uint32_t>(c);
    take(e.a, c);
    if (!e.is_half()) take(e.b, c);
  }
  return pc;
}

namespace detail_color {

/// Subgraph on the full node set holding a subset of edges.
struct EdgeSubset {
  Graph g;
  std::vector<EdgeId> to_orig;
};

inline EdgeSubset subset_graph(const Graph& g, const std::vector<EdgeId>& edges) {
  EdgeSubset s;
  s.g = Graph(g.n());
  for (EdgeId e : edges) {
    const Edge& orig = g.edge(e);
    if (orig.is_half())
      s.g.add_half_edge(orig.a);
    else
      s.g.add_edge(orig.a, orig.b);
    s.to_orig.push_back(e);
  }
  return s;
}

}  // namespace detail_color

/// Recursive coloring: virtualize at degree x, properly color the copy graph
/// with 2x-1 colors, recurse on the resulting degree-<=ceil(Delta/x) parts
/// with disjoint palettes. Palette <= 2^(1 + log Delta / log x) * Delta.
inline PaletteColoring coarse_color(const Graph& g, std::size_t x) {
  if (x < 2) throw ParameterError("coarse_color needs x >= 2");
  const std::size_t delta = g.n() ? g.max_degree() : 0;
  if (delta <= 2 * x) return base_color(g);
  PaletteColoring top = base_color(virtualize(g, x).first);  // edge ids preserved
  std::vector<std::vector<EdgeId>> classes(top.palette_size);
  for (EdgeId e = 0; e < g.m(); ++e) classes[top.color[e]].push_back(e);
  PaletteColoring pc;
  pc.color.assign(g.m(), 0);
  std::size_t offset = 0;
  for (const auto& cls : classes) {
    detail_color::EdgeSubset sub = detail_color::subset_graph(g, cls);
    PaletteColoring sp = coarse_color(sub.g, x);
    for (EdgeId i = 0; i < sub.g.m(); ++i)
      pc.color[sub.to_orig[i]] = static_cast<std::uint32_t>(offset + sp.color[i]);
    offset += sp.palette_size;
  }
  pc.palette_size = offset;
  return pc;
}

namespace detail_color {

inline PaletteColoring fine_color_rec(const Graph& g, double epsp, std::size_t threshold,
                                      const ColorConfig& cfg, RunMetrics* metrics) {
  const std::size_t delta = g.n() ? g.max_degree() : 0;
  if (delta <= threshold) return base_color(g);
  TwoColoring split = balanced_split_high(g, epsp, cfg.split, metrics);
  std::vector<EdgeId> red, blue;
  for (EdgeId e = 0; e < g.m(); ++e)
    (split.color[e] == EdgeColor::Red ? red : blue).push_back(e);
  EdgeSubset rs = subset_graph(g, red), bs = subset_graph(g, blue);
  PaletteColoring rp = fine_color_rec(rs.g, epsp, threshold, cfg, metrics);
  PaletteColoring bp = fine_color_rec(bs.g, epsp, threshold, cfg, metrics);
  PaletteColoring pc;
  pc.color.assign(g.m(), 0);
  for (EdgeId i = 0; i < rs.g.m(); ++i) pc.color[rs.to_orig[i]] = rp.color[i];
  for (EdgeId i = 0; i < bs.g.m(); ++i)
    pc.color[bs.to_orig[i]] = static_cast<std::uint32_t>(rp.palette_size + bp.color[i]);
  pc.palette_size = rp.palette_size + bp.palette_size;
  return pc;
}

}  // namespace detail_color

/// (2+eps)*Delta coloring: halve degrees recursively with balanced splits,
/// then greedy-color the low-degree leaves with disjoint palettes.
inline PaletteColoring fine_color(const Graph& g, double eps, const ColorConfig& cfg = {},
                                  RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  const std::size_t delta = g.n() ? g.max_degree() : 0;
  if (delta < 2) return base_color(g);
  const double epsp = eps / (2.0 * std::log2(static_cast<double>(delta)));
  const double lm = std::max(1.0, std::log(std::max<std::size_t>(g.m(), 2)) / std::log(1.5));
  const std::size_t threshold =
      cfg.fine_threshold_override ? cfg.fine_threshold_override
                                  : static_cast<std::size_t>(std::ceil(32.0 * lm / (epsp * epsp)));
  PaletteColoring pc = detail_color::fine_color_rec(g, epsp, threshold, cfg, metrics);
  const std::size_t bound =
      static_cast<std::size_t>(std::floor((2.0 + eps) * static_cast<double>(delta)));
  if (pc.palette_size > std::max<std::size_t>(bound, delta == 0 ? 0 : 2 * delta - 1))
    throw InvariantViolation("fine_color exceeded its palette bound: " +
                             std::to_string(pc.palette_size) + " > " + std::to_string(bound));
  return pc;
}

/// (4+eps)*Delta coloring by random edge partition: good parts take greedy
/// colors from the first palette half, everything touching an overloaded
/// (Type I) node is finished by fine_color on the second half.
inline PaletteColoring randomized_color(const Graph& g, double eps, std::uint64_t seed,
                                        const ColorConfig& cfg = {},
                                        RunMetrics* metrics = nullptr) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  const std::size_t delta = g.n() ? g.max_degree() : 0;
  if (delta < 2) return base_color(g);
  const double epsp = eps / 4.0;
  std::size_t x = cfg.x_override;
  if (x == 0) {
    double formula = epsp * epsp * static_cast<double>(delta) /
                     (18.0 * std::log(static_cast<double>(delta)));
    x = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(formula)));
  }
  // Random partition into x classes.
  RngStream rng(seed, 0x636f6c72ULL);
  std::vector<std::size_t> cls(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) cls[e] = static_cast<std::size_t>(rng.below(x));
  // Type I: some class-degree at or above (1+eps') * Delta / x.
  const double typeI_cut = (1.0 + epsp) * static_cast<double>(delta) / static_cast<double>(x);
  std::vector<std::vector<std::size_t>> class_deg(g.n(), std::vector<std::size_t>(x, 0));
  for (EdgeId e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    ++class_deg[ed.a][cls[e]];
    if (!ed.is_half()) ++class_deg[ed.b][cls[e]];
  }
  std::vector<bool> type1(g.n(), false);
  for (NodeId v = 0; v < g.n(); ++v)
    for (std::size_t i = 0; i < x; ++i)
      if (static_cast<double>(class_deg[v][i]) >= typeI_cut) type1[v] = true;
  // Good edges: class subgraphs avoiding Type I endpoints; block palettes.
  const std::size_t block =
      static_cast<std::size_t>(std::ceil(2.0 * (1.0 + epsp) * static_cast<double>(delta) /
                                         static_cast<double>(x)));
  PaletteColoring pc;
  pc.color.assign(g.m(), 0);
  std::vector<EdgeId> bad_edges;
  std::vector<std::vector<EdgeId>> good(x);
  for (EdgeId e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    bool bad = type1[ed.a] || (!ed.is_half() && type1[ed.b]);
    if (bad)
      bad_edges.push_back(e);
    else
      good[cls[e]].push_back(e);
  }
  for (std::size_t i = 0; i < x; ++i) {
    detail_color::EdgeSubset sub = detail_color::subset_graph(g, good[i]);
    PaletteColoring sp = base_color(sub.g);
    if (sp.palette_size > block)
      throw InvariantViolation("good-subgraph palette exceeded its block");
    for (EdgeId k = 0; k < sub.g.m(); ++k)
      pc.color[sub.to_orig[k]] = static_cast<std::uint32_t>(i * block + sp.color[k]);
  }
  // Bad part: components bounded, colored with the C2 half by fine_color.
  const std::size_t c2 = static_cast<std::size_t>(
      std::ceil(2.0 * (1.0 + epsp) * static_cast<double>(delta)));
  detail_color::EdgeSubset bad = detail_color::subset_graph(g, bad_edges);
  const std::size_t cap = cfg.bad_component_cap ? cfg.bad_component_cap : g.n();
  std::size_t max_bad = 0;
  for (const auto& comp : bad.g.components()) {
    bool touched = comp.size() > 1 || bad.g.degree(comp[0]) > 0;
    if (touched) max_bad = std::max(max_bad, comp.size());
  }
  if (max_bad > cap)
    throw InvariantViolation("bad component of size " + std::to_string(max_bad) +
                             " exceeds the cap " + std::to_string(cap));
  if (metrics) metrics->max_bad_component = std::max(metrics->max_bad_component, max_bad);
  if (bad.g.m() > 0) {
    double epsf = std::min(2.0 * epsp, 0.99);
    PaletteColoring bp = fine_color(bad.g, epsf, cfg, metrics);
    if (bp.palette_size > c2)
      throw InvariantViolation("bad-subgraph palette exceeded the reserved half");
    for (EdgeId k = 0; k < bad.g.m(); ++k)
      pc.color[bad.to_orig[k]] = static_cast<std::uint32_t>(x * block + bp.color[k]);
  }
  pc.palette_size = x * block + c2;
  return pc;
}

}  // namespace degsplit
