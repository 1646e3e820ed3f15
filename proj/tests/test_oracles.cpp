#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <vector>

#include "degsplit/graph.hpp"
#include "degsplit/oracles.hpp"

using namespace degsplit;

namespace {

// Independent exhaustive reference: try all 2^m orientations.
std::size_t min_max_outdeg_exhaustive(const Graph& g) {
  REQUIRE(g.m() <= 22);
  std::size_t best = g.m() + 1;
  for (std::uint64_t mask = 0; mask < (1ULL << g.m()); ++mask) {
    std::vector<std::size_t> out(g.n(), 0);
    for (EdgeId e = 0; e < g.m(); ++e) {
      const Edge& ed = g.edge(e);
      ++out[(mask >> e) & 1 ? ed.b : ed.a];
    }
    best = std::min(best, *std::max_element(out.begin(), out.end()));
  }
  return best;
}

// Independent exhaustive reference: max over node subsets of
// ceil(E(S) / (|S|-1)).
std::size_t arboricity_exhaustive(const Graph& g) {
  REQUIRE(g.n() <= 8);
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << g.n()); ++mask) {
    std::size_t nodes = static_cast<std::size_t>(__builtin_popcount(mask));
    if (nodes < 2) continue;
    std::size_t edges = 0;
    for (const Edge& e : g.edges())
      if (((mask >> e.a) & 1) && ((mask >> e.b) & 1)) ++edges;
    if (edges == 0) continue;
    best = std::max(best, (edges + nodes - 2) / (nodes - 1));
  }
  return best;
}

}  // namespace

TEST_CASE("check_sinkless") {
  Graph g = make_cycle(4);
  Orientation o(g.m());
  for (const Edge& e : g.edges()) o.set(e, e.a);  // around the cycle
  CHECK(check_sinkless(g, o).ok());
  o.flip(0);  // node 0 now has two incoming... node 1 keeps its out-edge
  // Make node 1 a sink: edges 0 (0-1) and 1 (1-2); point both away from... at 1.
  Orientation bad(g.m());
  bad.set(g.edge(0), 0);
  bad.set(g.edge(1), 2);
  bad.set(g.edge(2), 2);
  bad.set(g.edge(3), 0);
  auto r = check_sinkless(g, bad);
  CHECK(!r.ok());
  CHECK(r.checks[0].witness.find("node 1") != std::string::npos);
}

TEST_CASE("check_balance and check_proper") {
  Graph g = make_clique(4);
  TwoColoring col(g, EdgeColor::Red);
  CHECK(check_balance(g, col, 3).ok());
  CHECK(!check_balance(g, col, 2).ok());

  PaletteColoring p;
  p.palette_size = 5;
  p.color.assign(g.m(), 0);
  CHECK(!check_proper(g, p).ok());
  // K4 is 3-edge-chromatic: perfect matchings {01,23},{02,13},{03,12}.
  auto idx = [&](NodeId a, NodeId b) {
    for (const Edge& e : g.edges())
      if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.id;
    REQUIRE(false);
    return EdgeId{0};
  };
  p.color[idx(0, 1)] = 0;
  p.color[idx(2, 3)] = 0;
  p.color[idx(0, 2)] = 1;
  p.color[idx(1, 3)] = 1;
  p.color[idx(0, 3)] = 2;
  p.color[idx(1, 2)] = 2;
  CHECK(check_proper(g, p).ok());
}

TEST_CASE("check_forests flags cycles and broken stars") {
  Graph g = make_cycle(3);
  ForestDecomposition f;
  f.forests = 1;
  f.forest_of.assign(3, 0);
  f.star_flag = {false};
  CHECK(!check_forests(g, f).ok());
  f.forests = 2;
  f.forest_of = {0, 0, 1};
  f.star_flag = {false, false};
  CHECK(check_forests(g, f).ok());
  // Path of length 2 is a star; length 3 is not.
  Graph p4(4);
  p4.add_edge(0, 1);
  p4.add_edge(1, 2);
  p4.add_edge(2, 3);
  ForestDecomposition fs;
  fs.forests = 1;
  fs.forest_of.assign(3, 0);
  fs.star_flag = {true};
  CHECK(!check_forests(p4, fs).ok());
  fs.forest_of = {0, 0, 1};
  fs.forests = 2;
  fs.star_flag = {true, true};
  CHECK(check_forests(p4, fs).ok());
}

TEST_CASE("min_max_outdegree_exact matches exhaustive on small graphs") {
  // Frozen expected values established by the exhaustive reference.
  CHECK(min_max_outdegree_exact(make_clique(5)) == 2);
  CHECK(min_max_outdegree_exact(make_cycle(7)) == 1);
  CHECK(min_max_outdegree_exact(make_tree(9, 3)) == 1);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Graph g = make_gnp(8, 0.45, seed);
    if (g.m() > 22) continue;
    CHECK(min_max_outdegree_exact(g) == min_max_outdeg_exhaustive(g));
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Graph g = make_regular(10, 4, seed);
    CHECK(min_max_outdegree_exact(g) == min_max_outdeg_exhaustive(g));
  }
}

TEST_CASE("min_max_outdegree_exact handles half-edges") {
  Graph g(2);
  g.add_edge(0, 1);
  g.add_half_edge(0);
  g.add_half_edge(0);
  // Node 0 is forced to out-degree >= 2 by its half-edges.
  CHECK(min_max_outdegree_exact(g) == 2);
}

TEST_CASE("arboricity_exact_small matches exhaustive on all small graphs") {
  CHECK(arboricity_exact_small(make_clique(5)) == 3);
  CHECK(arboricity_exact_small(make_cycle(6)) == 2);  // ceil(6/5): a cycle is not a forest
  CHECK(arboricity_exact_small(make_tree(8, 1)) == 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = make_gnp(8, 0.5, seed);
    if (g.m() == 0) continue;
    CHECK(arboricity_exact_small(g) == arboricity_exhaustive(g));
  }
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Graph g = make_gnp(7, 0.8, seed);
    if (g.m() == 0) continue;
    CHECK(arboricity_exact_small(g) == arboricity_exhaustive(g));
  }
}

TEST_CASE("arboricity of forest unions is at most a") {
  for (int a = 1; a <= 4; ++a) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Graph g = make_forest_union(50, a, seed);
      CHECK(arboricity_exact_small(g) <= static_cast<std::size_t>(a));
    }
  }
  Graph g = make_forest_union(100, 3, 7);
  CHECK(arboricity_exact_small(g) <= 3);
}

TEST_CASE("euler_split balance bound") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = make_regular(24, 6, seed);
    TwoColoring col = euler_split(g);
    // Delta = 6: per-color degree <= floor(6/2) + 1 = 4.
    CHECK(check_balance(g, col, 4).ok());
    // Every edge got a color and the ledger is consistent.
    TwoColoring copy = col;
    copy.recount(g);
    for (NodeId v = 0; v < g.n(); ++v) {
      CHECK(copy.red_deg[v] == col.red_deg[v]);
      CHECK(copy.blue_deg[v] == col.blue_deg[v]);
    }
  }
}

TEST_CASE("euler_split on odd degrees and half-edges") {
  Graph g = make_clique(6);  // 5-regular, odd degrees
  TwoColoring col = euler_split(g);
  CHECK(check_balance(g, col, 3).ok());  // floor(5/2)+1 = 3

  Graph h(3);
  h.add_edge(0, 1);
  h.add_edge(1, 2);
  h.add_edge(0, 2);
  h.add_half_edge(0);
  TwoColoring hc = euler_split(h);
  CHECK(check_balance(h, hc, 2).ok());
}

TEST_CASE("euler_split exact frozen values on a cycle") {
  // Even cycle: alternation is exact, per-color degree is 1 everywhere.
  Graph g = make_cycle(8);
  TwoColoring col = euler_split(g);
  for (NodeId v = 0; v < 8; ++v) {
    CHECK(col.red_deg[v] == 1);
    CHECK(col.blue_deg[v] == 1);
  }
}
