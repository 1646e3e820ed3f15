#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "degsplit/graph.hpp"
#include "degsplit/json_io.hpp"

using namespace degsplit;

TEST_CASE("construction rejects self-loops and bad endpoints") {
  Graph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), ParameterError);
  CHECK_THROWS_AS(g.add_edge(0, 5), ParameterError);
  g.add_edge(0, 1);
  g.add_edge(0, 1);  // parallel edges allowed
  g.add_half_edge(2);
  CHECK(g.m() == 3);
  CHECK(g.degree(0) == 2);
  CHECK(g.degree(2) == 1);
  CHECK(g.edge(2).is_half());
  g.audit();
}

TEST_CASE("cycle generator") {
  Graph g = make_cycle(6);
  CHECK(g.n() == 6);
  CHECK(g.m() == 6);
  for (NodeId v = 0; v < 6; ++v) CHECK(g.degree(v) == 2);
  g.audit();
  CHECK_THROWS_AS(make_cycle(2), ParameterError);
}

TEST_CASE("clique generator") {
  Graph g = make_clique(5);
  CHECK(g.m() == 10);
  for (NodeId v = 0; v < 5; ++v) CHECK(g.degree(v) == 4);
}

TEST_CASE("regular generator is simple and regular") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Graph g = make_regular(40, 5, seed);
    CHECK(g.n() == 40);
    CHECK(g.m() == 100);
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const Edge& e : g.edges()) {
      CHECK(e.a != e.b);
      auto key = std::minmax(e.a, e.b);
      CHECK(!seen.count({key.first, key.second}));
      seen.insert({key.first, key.second});
    }
    for (NodeId v = 0; v < g.n(); ++v) CHECK(g.degree(v) == 5);
    g.audit();
  }
  CHECK_THROWS_AS(make_regular(5, 3, 1), ParameterError);  // odd n*delta
}

TEST_CASE("regular generator determinism") {
  Graph a = make_regular(30, 4, 7);
  Graph b = make_regular(30, 4, 7);
  REQUIRE(a.m() == b.m());
  for (EdgeId e = 0; e < a.m(); ++e) {
    CHECK(a.edge(e).a == b.edge(e).a);
    CHECK(a.edge(e).b == b.edge(e).b);
  }
}

TEST_CASE("tree and forest_union generators") {
  Graph t = make_tree(20, 11);
  CHECK(t.m() == 19);
  CHECK(t.components().size() == 1);
  Graph f = make_forest_union(20, 3, 11);
  CHECK(f.m() == 3 * 19);
  f.audit();
}

TEST_CASE("gnp generator") {
  Graph g = make_gnp(30, 0.2, 5);
  g.audit();
  CHECK(g.m() > 0);
  Graph empty = make_gnp(30, 0.0, 5);
  CHECK(empty.m() == 0);
}

TEST_CASE("virtualize splits nodes into bounded-degree copies") {
  Graph g = make_regular(16, 8, 3);
  auto [h, vm] = virtualize(g, 3);
  CHECK(h.m() == g.m());
  for (NodeId c = 0; c < h.n(); ++c) CHECK(h.degree(c) <= 3);
  for (NodeId c = 0; c < h.n(); ++c) CHECK(vm.copy_to_original[c] < g.n());
  // ceil(8/3) = 3 copies per node
  for (NodeId v = 0; v < g.n(); ++v) CHECK(vm.original_copies[v].size() == 3);
  // Edge ids preserved; endpoints map back to originals.
  for (EdgeId e = 0; e < g.m(); ++e) {
    CHECK(vm.copy_to_original[h.edge(e).a] == g.edge(e).a);
    CHECK(vm.copy_to_original[h.edge(e).b] == g.edge(e).b);
  }
  h.audit();
}

TEST_CASE("virtualize keeps degree-zero nodes") {
  Graph g(3);
  g.add_edge(0, 1);
  auto [h, vm] = virtualize(g, 2);
  CHECK(h.n() == 3);
  CHECK(vm.original_copies[2].size() == 1);
}

TEST_CASE("graph json round trip") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_half_edge(2);
  g.add_edge(2, 3);
  json j = graph_to_json(g);
  Graph h = graph_from_json(j);
  CHECK(h.n() == g.n());
  REQUIRE(h.m() == g.m());
  for (EdgeId e = 0; e < g.m(); ++e) {
    CHECK(h.edge(e).a == g.edge(e).a);
    CHECK(h.edge(e).b == g.edge(e).b);
  }
  CHECK(graph_to_json(h).dump() == j.dump());
}

TEST_CASE("components") {
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  auto comps = g.components();
  CHECK(comps.size() == 3);
}
