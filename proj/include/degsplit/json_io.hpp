#pragma once

#include <string>

#include <json.hpp>

#include "degsplit/assignments.hpp"
#include "degsplit/graph.hpp"

namespace degsplit {

using json = nlohmann::json;

// Graph: {"n": n, "edges": [[id, u, v-or-null], ...]} sorted by edge id.

inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    json row = json::array({e.id, e.a});
    if (e.is_half())
      row.push_back(nullptr);
    else
      row.push_back(e.b);
    edges.push_back(std::move(row));
  }
  return json{{"n", g.n()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const json& j) {
  Graph g(j.at("n").get<NodeId>());
  EdgeId expect = 0;
  for (const auto& row : j.at("edges")) {
    if (row.at(0).get<EdgeId>() != expect++)
      throw ParameterError("graph json edges must be sorted by dense edge id");
    NodeId u = row.at(1).get<NodeId>();
    if (row.at(2).is_null())
      g.add_half_edge(u);
    else
      g.add_edge(u, row.at(2).get<NodeId>());
  }
  return g;
}

// Orientation: {"<edge_id>": [from, to-or-null], ...}

inline json orientation_to_json(const Orientation& o) {
  json j = json::object();
  for (EdgeId e = 0; e < o.from.size(); ++e) {
    json pair = json::array({o.from[e]});
    if (o.to[e] == kHalf)
      pair.push_back(nullptr);
    else
      pair.push_back(o.to[e]);
    j[std::to_string(e)] = std::move(pair);
  }
  return j;
}

inline Orientation orientation_from_json(const json& j, const Graph& g) {
  Orientation o(g.m());
  for (auto it = j.begin(); it != j.end(); ++it) {
    EdgeId e = static_cast<EdgeId>(std::stoul(it.key()));
    if (e >= g.m()) throw ParameterError("orientation references unknown edge");
    o.set(g.edge(e), it.value().at(0).get<NodeId>());
  }
  return o;
}

// TwoColoring: {"<edge_id>": "R"|"B", ...}

inline json two_coloring_to_json(const TwoColoring& c) {
  json j = json::object();
  for (EdgeId e = 0; e < c.color.size(); ++e)
    j[std::to_string(e)] = (c.color[e] == EdgeColor::Red) ? "R" : "B";
  return j;
}

inline TwoColoring two_coloring_from_json(const json& j, const Graph& g) {
  TwoColoring c(g, EdgeColor::Red);
  for (auto it = j.begin(); it != j.end(); ++it) {
    EdgeId e = static_cast<EdgeId>(std::stoul(it.key()));
    if (e >= g.m()) throw ParameterError("coloring references unknown edge");
    const std::string& s = it.value().get_ref<const std::string&>();
    c.set(g.edge(e), s == "R" ? EdgeColor::Red : EdgeColor::Blue);
  }
  return c;
}

// PaletteColoring: {"palette_size": k, "colors": {"<edge_id>": idx, ...}}

inline json palette_to_json(const PaletteColoring& p) {
  json colors = json::object();
  for (EdgeId e = 0; e < p.color.size(); ++e) colors[std::to_string(e)] = p.color[e];
  return json{{"palette_size", p.palette_size}, {"colors", std::move(colors)}};
}

inline PaletteColoring palette_from_json(const json& j, const Graph& g) {
  PaletteColoring p;
  p.palette_size = j.at("palette_size").get<std::size_t>();
  p.color.assign(g.m(), 0);
  for (auto it = j.at("colors").begin(); it != j.at("colors").end(); ++it) {
    EdgeId e = static_cast<EdgeId>(std::stoul(it.key()));
    if (e >= g.m()) throw ParameterError("palette references unknown edge");
    p.color[e] = it.value().get<std::uint32_t>();
  }
  return p;
}

// ForestDecomposition:
// {"forests": k, "assignment": {"<edge_id>": f}, "star_flags": [bool,...]}

inline json forests_to_json(const ForestDecomposition& f) {
  json assignment = json::object();
  for (EdgeId e = 0; e < f.forest_of.size(); ++e)
    assignment[std::to_string(e)] = f.forest_of[e];
  json flags = json::array();
  for (bool b : f.star_flag) flags.push_back(b);
  return json{{"forests", f.forests},
              {"assignment", std::move(assignment)},
              {"star_flags", std::move(flags)}};
}

inline ForestDecomposition forests_from_json(const json& j, const Graph& g) {
  ForestDecomposition f;
  f.forests = j.at("forests").get<std::size_t>();
  f.forest_of.assign(g.m(), 0);
  for (auto it = j.at("assignment").begin(); it != j.at("assignment").end(); ++it)
    f.forest_of[static_cast<EdgeId>(std::stoul(it.key()))] = it.value().get<std::uint32_t>();
  for (const auto& b : j.at("star_flags")) f.star_flag.push_back(b.get<bool>());
  return f;
}

}  // namespace degsplit
