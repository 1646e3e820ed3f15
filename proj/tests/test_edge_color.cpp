#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "degsplit/edge_color.hpp"
#include "degsplit/oracles.hpp"

using namespace degsplit;

TEST_CASE("base_color greedy bounds") {
  SUBCASE("matching uses one color") {
    Graph g(4);
    g.add_edge(0, 1);
    g.add_edge(2, 3);
    PaletteColoring pc = base_color(g);
    CHECK(pc.palette_size == 1);
    CHECK(check_proper(g, pc).ok());
  }
  SUBCASE("triangle fits in three") {
    Graph g = make_cycle(3);
    PaletteColoring pc = base_color(g);
    CHECK(pc.palette_size == 3);
    CHECK(check_proper(g, pc).ok());
    std::set<std::uint32_t> used(pc.color.begin(), pc.color.end());
    CHECK(used.size() == 3);
  }
  SUBCASE("path on four nodes") {
    Graph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    PaletteColoring pc = base_color(g);
    CHECK(check_proper(g, pc).ok());
    std::set<std::uint32_t> used(pc.color.begin(), pc.color.end());
    CHECK(used.size() == 2);
  }
  SUBCASE("random regular stays proper") {
    Graph g = make_regular(120, 9, 5);
    PaletteColoring pc = base_color(g);
    CHECK(pc.palette_size == 17);
    CHECK(check_proper(g, pc).ok());
  }
  SUBCASE("half edges only conflict at their endpoint") {
    Graph g(2);
    g.add_half_edge(0);
    g.add_half_edge(0);
    g.add_edge(0, 1);
    PaletteColoring pc = base_color(g);
    CHECK(check_proper(g, pc).ok());
  }
  SUBCASE("wide palette crosses the 64-bit word boundary") {
    Graph g = make_regular(256, 40, 2);
    PaletteColoring pc = base_color(g);
    CHECK(pc.palette_size == 79);
    CHECK(check_proper(g, pc).ok());
  }
  SUBCASE("empty graph") {
    Graph g(3);
    PaletteColoring pc = base_color(g);
    CHECK(pc.palette_size == 0);
  }
}

TEST_CASE("coarse_color recursion") {
  CHECK_THROWS_AS(coarse_color(make_cycle(4), 1), ParameterError);

  SUBCASE("low degree falls back to greedy") {
    Graph g = make_cycle(8);
    PaletteColoring pc = coarse_color(g, 4);
    CHECK(pc.palette_size == 3);
    CHECK(check_proper(g, pc).ok());
  }
  SUBCASE("regular degree 16 with x = 4") {
    Graph g = make_regular(128, 16, 7);
    PaletteColoring pc = coarse_color(g, 4);
    CHECK(check_proper(g, pc).ok());
    // Product bound: (2x-1) parts of degree <= 4, each greedy at 7 colors.
    CHECK(pc.palette_size <= 49);
    CHECK(pc.palette_size <= 128);
  }
  SUBCASE("irregular graph keeps properness") {
    Graph g = make_gnp(90, 0.3, 11);
    PaletteColoring pc = coarse_color(g, 3);
    CHECK(check_proper(g, pc).ok());
    double delta = static_cast<double>(g.max_degree());
    double bound = std::pow(2.0, 1.0 + std::log(delta) / std::log(3.0)) * delta;
    CHECK(static_cast<double>(pc.palette_size) <= bound);
  }
  SUBCASE("split parts respect the degree cap") {
    Graph g = make_regular(64, 12, 3);
    auto [gv, vm] = virtualize(g, 4);
    PaletteColoring top = base_color(gv);
    CHECK(top.palette_size <= 7);
    std::vector<std::vector<std::size_t>> deg(g.n(),
                                              std::vector<std::size_t>(top.palette_size, 0));
    for (const Edge& e : g.edges()) {
      ++deg[e.a][top.color[e.id]];
      ++deg[e.b][top.color[e.id]];
    }
    for (NodeId v = 0; v < g.n(); ++v)
      for (std::size_t c = 0; c < top.palette_size; ++c) CHECK(deg[v][c] <= 3);
  }
}

TEST_CASE("fine_color") {
  CHECK_THROWS_AS(fine_color(make_cycle(4), 0.0), ParameterError);
  CHECK_THROWS_AS(fine_color(make_cycle(4), 1.0), ParameterError);

  SUBCASE("below the threshold it is pure greedy") {
    Graph g = make_regular(100, 8, 1);
    PaletteColoring pc = fine_color(g, 0.5);
    CHECK(pc.palette_size == 15);
    CHECK(check_proper(g, pc).ok());
  }
  SUBCASE("forced recursion halves degrees") {
    Graph g = make_regular(150, 64, 9);
    ColorConfig cfg;
    cfg.fine_threshold_override = 34;
    PaletteColoring pc = fine_color(g, 0.9, cfg);
    CHECK(check_proper(g, pc).ok());
    CHECK(pc.palette_size <= 185);  // (2 + eps) * 64
  }
  SUBCASE("two recursion levels") {
    Graph g = make_regular(300, 128, 4);
    ColorConfig cfg;
    cfg.fine_threshold_override = 35;
    PaletteColoring pc = fine_color(g, 0.9, cfg);
    CHECK(check_proper(g, pc).ok());
    CHECK(pc.palette_size <= 371);  // (2 + eps) * 128
  }
  SUBCASE("degree one graph short-circuits") {
    Graph g(2);
    g.add_edge(0, 1);
    PaletteColoring pc = fine_color(g, 0.5);
    CHECK(pc.palette_size == 1);
  }
}

TEST_CASE("randomized_color") {
  CHECK_THROWS_AS(randomized_color(make_cycle(4), 1.5, 1), ParameterError);

  SUBCASE("single class with no overloaded nodes") {
    Graph g = make_regular(256, 32, 3);
    PaletteColoring pc = randomized_color(g, 0.5, 7);
    CHECK(check_proper(g, pc).ok());
    CHECK(pc.palette_size <= 144);  // (4 + eps) * 32
  }
  SUBCASE("forced partition produces bad nodes and still colors") {
    Graph g = make_regular(300, 24, 5);
    ColorConfig cfg;
    cfg.x_override = 6;
    RunMetrics rm;
    PaletteColoring pc = randomized_color(g, 0.5, 11, cfg, &rm);
    CHECK(check_proper(g, pc).ok());
    CHECK(pc.palette_size <= 108);  // (4 + eps) * 24
  }
  SUBCASE("deterministic for a fixed seed") {
    Graph g = make_regular(150, 18, 2);
    ColorConfig cfg;
    cfg.x_override = 3;
    PaletteColoring a = randomized_color(g, 0.25, 42, cfg);
    PaletteColoring b = randomized_color(g, 0.25, 42, cfg);
    CHECK(a.color == b.color);
    CHECK(a.palette_size == b.palette_size);
  }
  SUBCASE("tiny component cap triggers the diagnostic") {
    Graph g = make_regular(300, 24, 5);
    ColorConfig cfg;
    cfg.x_override = 6;
    cfg.bad_component_cap = 1;
    CHECK_THROWS_AS(randomized_color(g, 0.5, 11, cfg), InvariantViolation);
  }
}
