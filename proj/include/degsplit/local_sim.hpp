#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "degsplit/graph.hpp"
#include "degsplit/rng.hpp"

namespace degsplit {

struct RunMetrics {
  std::size_t rounds = 0;
  std::size_t messages = 0;
  std::vector<std::pair<std::string, std::size_t>> per_phase_rounds;
  std::size_t max_bad_component = 0;

  void add_phase(const std::string& label, std::size_t r) {
    per_phase_rounds.emplace_back(label, r);
    rounds += r;
  }

  void absorb(const RunMetrics& other, const std::string& prefix) {
    for (const auto& [label, r] : other.per_phase_rounds)
      per_phase_rounds.emplace_back(prefix + "/" + label, r);
    rounds += other.rounds;
    messages += other.messages;
    max_bad_component = std::max(max_bad_component, other.max_bad_component);
  }

  nlohmann::json to_json() const {
    nlohmann::json phases = nlohmann::json::object();
    for (const auto& [label, r] : per_phase_rounds) phases[label] = r;
    return nlohmann::json{{"rounds", rounds},
                          {"messages", messages},
                          {"per_phase_rounds", phases},
                          {"max_bad_component", max_bad_component}};
  }
};

/// What a node knows at wake-up: its id, n, and incident (edge, neighbor)
/// pairs in ascending edge-id order. Neighbor is kHalf on half-edges.
struct NodeContext {
  NodeId id;
  NodeId n;
  const std::vector<Incidence>* incident;
};

/// Synchronous message-passing execution. A program supplies:
///   struct P {
///     using State = ...;
///     using Message = ...;
///     State init(const NodeContext&);
///     void send(const State&, const NodeContext&, std::size_t round,
///               std::vector<std::optional<Message>>& outbox);
///     bool receive(State&, const NodeContext&, std::size_t round,
///                  const std::vector<std::optional<Message>>& inbox,
///                  RngStream& rng);   // returns halt
///   };
/// Outbox/inbox slots align with the context's incident order. Each round all
/// sends happen, then all receives; a message crosses exactly one edge per
/// round, which is what enforces locality. Messages sent on half-edges are
/// discarded. Halted nodes neither send nor process further messages.
template <typename P>
struct RunResult {
  std::vector<typename P::State> states;
  RunMetrics metrics;
  bool timed_out = false;
};

template <typename P>
RunResult<P> run(const Graph& g, P& prog, std::size_t max_rounds, std::uint64_t seed) {
  using Message = typename P::Message;
  RunResult<P> result;
  std::vector<NodeContext> ctx(g.n());
  std::vector<std::vector<Incidence>> inc_sorted(g.n());
  for (NodeId v = 0; v < g.n(); ++v) {
    inc_sorted[v] = g.incident(v);
    std::sort(inc_sorted[v].begin(), inc_sorted[v].end(),
              [](const Incidence& x, const Incidence& y) { return x.edge < y.edge; });
    ctx[v] = {v, g.n(), &inc_sorted[v]};
  }
  // Slot of each (edge, endpoint) in the endpoint's sorted incidence list.
  std::vector<std::size_t> slot_a(g.m()), slot_b(g.m());
  for (NodeId v = 0; v < g.n(); ++v) {
    for (std::size_t i = 0; i < inc_sorted[v].size(); ++i) {
      const Edge& e = g.edge(inc_sorted[v][i].edge);
      (e.a == v ? slot_a : slot_b)[e.id] = i;
    }
  }
  std::vector<bool> halted(g.n(), false);
  result.states.reserve(g.n());
  for (NodeId v = 0; v < g.n(); ++v) result.states.push_back(prog.init(ctx[v]));

  std::vector<std::vector<std::optional<Message>>> inbox(g.n());
  for (NodeId v = 0; v < g.n(); ++v) inbox[v].assign(inc_sorted[v].size(), std::nullopt);

  std::size_t halted_count = 0;
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    if (halted_count == g.n()) break;
    ++result.metrics.rounds;
    // Send phase.
    std::vector<std::vector<std::optional<Message>>> next(g.n());
    for (NodeId v = 0; v < g.n(); ++v) next[v].assign(inc_sorted[v].size(), std::nullopt);
    for (NodeId v = 0; v < g.n(); ++v) {
      if (halted[v]) continue;
      std::vector<std::optional<Message>> outbox(inc_sorted[v].size());
      prog.send(result.states[v], ctx[v], round, outbox);
      for (std::size_t i = 0; i < outbox.size(); ++i) {
        if (!outbox[i]) continue;
        const Edge& e = g.edge(inc_sorted[v][i].edge);
        if (e.is_half()) continue;  // discarded, not counted
        NodeId u = e.other(v);
        next[u][(e.a == u ? slot_a : slot_b)[e.id]] = std::move(*outbox[i]);
        ++result.metrics.messages;
      }
    }
    inbox = std::move(next);
    // Receive phase.
    for (NodeId v = 0; v < g.n(); ++v) {
      if (halted[v]) continue;
      RngStream rng(key_combine(seed, v), round);
      if (prog.receive(result.states[v], ctx[v], round, inbox[v], rng)) {
        halted[v] = true;
        ++halted_count;
      }
    }
  }
  result.timed_out = (halted_count != g.n());
  return result;
}

// ---------------------------------------------------------------------------
// Ball gathering: after exactly r rounds each node's view holds every node
// within distance r and every edge with an endpoint within distance r-1.

struct BallView {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;  // sorted by edge id
};

namespace detail {

struct GatherProgram {
  struct State {
    NodeId self;
    std::map<EdgeId, Edge> edges;
    std::set<NodeId> nodes;
  };
  using Message = State;
  std::size_t radius;

  State init(const NodeContext& ctx) {
    State s;
    s.self = ctx.id;
    s.nodes.insert(ctx.id);
    for (const Incidence& inc : *ctx.incident) {
      Edge e{inc.edge, ctx.id, inc.other};
      if (inc.other != kHalf && inc.other < ctx.id) std::swap(e.a, e.b);
      s.edges[inc.edge] = e;
      if (inc.other != kHalf) s.nodes.insert(inc.other);
    }
    return s;
  }

  void send(const State& s, const NodeContext&, std::size_t,
            std::vector<std::optional<Message>>& outbox) {
    for (auto& slot : outbox) slot = s;
  }

  bool receive(State& s, const NodeContext&, std::size_t round,
               const std::vector<std::optional<Message>>& inbox, RngStream&) {
    for (const auto& msg : inbox) {
      if (!msg) continue;
      s.edges.insert(msg->edges.begin(), msg->edges.end());
      s.nodes.insert(msg->nodes.begin(), msg->nodes.end());
    }
    return round >= radius;
  }
};

}  // namespace detail

inline std::vector<BallView> gather_ball(const Graph& g, std::size_t r,
                                         RunMetrics* metrics = nullptr) {
  std::vector<BallView> views(g.n());
  if (r == 0) {
    for (NodeId v = 0; v < g.n(); ++v) {
      views[v].nodes = {v};
      for (const Incidence& inc : g.incident(v)) {
        Edge e{inc.edge, v, inc.other};
        if (inc.other != kHalf && inc.other < v) std::swap(e.a, e.b);
        views[v].edges.push_back(e);
      }
      std::sort(views[v].edges.begin(), views[v].edges.end(),
                [](const Edge& x, const Edge& y) { return x.id < y.id; });
    }
    return views;
  }
  detail::GatherProgram prog{r};
  auto result = run(g, prog, r, /*seed=*/0);
  if (metrics) metrics->absorb(result.metrics, "gather_ball");
  for (NodeId v = 0; v < g.n(); ++v) {
    const auto& s = result.states[v];
    // BFS over the gathered subgraph to trim to the exact ball.
    std::map<NodeId, std::size_t> dist;
    std::map<NodeId, std::vector<Edge>> adj;
    for (const auto& [id, e] : s.edges) {
      if (e.b == kHalf) continue;
      adj[e.a].push_back(e);
      adj[e.b].push_back(e);
    }
    std::vector<NodeId> frontier = {v};
    dist[v] = 0;
    for (std::size_t d = 0; d < r && !frontier.empty(); ++d) {
      std::vector<NodeId> next;
      for (NodeId u : frontier) {
        for (const Edge& e : adj[u]) {
          NodeId w = e.other(u);
          if (!dist.count(w)) {
            dist[w] = d + 1;
            next.push_back(w);
          }
        }
      }
      frontier = std::move(next);
    }
    for (const auto& [u, d] : dist) views[v].nodes.push_back(u);
    for (const auto& [id, e] : s.edges) {
      std::size_t da = dist.count(e.a) ? dist[e.a] : r + 1;
      std::size_t db = (e.b != kHalf && dist.count(e.b)) ? dist[e.b] : r + 1;
      if (std::min(da, db) + 1 <= r) views[v].edges.push_back(e);
    }
  }
  return views;
}

}  // namespace degsplit
