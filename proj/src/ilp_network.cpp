#include <algorithm>

#include "mapfdl/graph.hpp"
#include "mapfdl/ilp.hpp"
#include "mapfdl/invariant.hpp"

namespace mapfdl {
namespace ilp {

bool FlowNetwork::decode_vertex_node(int node, int& v, int& t, bool& is_out) const {
  if (node < 0 || node >= 2 * vertex_count * (deadline + 1)) return false;
  is_out = (node % 2) != 0;
  const int pair_index = node / 2;
  t = pair_index / vertex_count;
  v = pair_index % vertex_count;
  return true;
}

FlowNetwork build_network(const Instance& instance) {
  FlowNetwork net;
  net.vertex_count = instance.graph.vertex_count();
  net.deadline = instance.deadline;
  net.edge_count = instance.graph.edge_count();

  const int V = net.vertex_count;
  const int T = net.deadline;
  const int E = net.edge_count;

  net.arcs.reserve(static_cast<std::size_t>(V) * (T + 1) + static_cast<std::size_t>(V) * T +
                   static_cast<std::size_t>(5) * E * T);

  // Vertex-internal arcs: occupancy of (v, t).
  for (int t = 0; t <= T; ++t) {
    for (int v = 0; v < V; ++v)
      net.arcs.push_back({net.node_in(v, t), net.node_out(v, t), ArcKind::vertex_internal});
  }
  // Wait arcs.
  for (int t = 0; t < T; ++t) {
    for (int v = 0; v < V; ++v)
      net.arcs.push_back({net.node_out(v, t), net.node_in(v, t + 1), ArcKind::wait});
  }
  // Edge gadgets: two entries, one unit middle, two exits.
  const auto& edges = instance.graph.edges();
  for (int t = 0; t < T; ++t) {
    for (int e = 0; e < E; ++e) {
      const auto [u, v] = edges[e];
      const int gin = net.gadget_in(e, t);
      const int gout = net.gadget_out(e, t);
      net.arcs.push_back({net.node_out(u, t), gin, ArcKind::gadget_entry});
      net.arcs.push_back({net.node_out(v, t), gin, ArcKind::gadget_entry});
      net.arcs.push_back({gin, gout, ArcKind::gadget_middle});
      net.arcs.push_back({gout, net.node_in(u, t + 1), ArcKind::gadget_exit});
      net.arcs.push_back({gout, net.node_in(v, t + 1), ArcKind::gadget_exit});
    }
  }

  net.commodities.reserve(instance.agent_count());
  for (int i = 0; i < instance.agent_count(); ++i) {
    net.commodities.push_back(Commodity{i, net.node_in(instance.agents[i].start, 0),
                                        net.node_out(instance.agents[i].goal, T)});
  }
  return net;
}

ReducedNetwork reduce_network(FlowNetwork network, const Instance& instance) {
  ReducedNetwork reduced;
  const int V = network.vertex_count;
  const int T = network.deadline;
  const int E = network.edge_count;
  const auto& edges = instance.graph.edges();

  const int commodity_count = static_cast<int>(network.commodities.size());
  reduced.node_admissible.resize(commodity_count);
  reduced.admissible_arcs.resize(commodity_count);

  for (int i = 0; i < commodity_count; ++i) {
    const int agent = network.commodities[i].agent;
    const std::vector<int> from_start = bfs_distances(instance.graph, instance.agents[agent].start);
    const std::vector<int> to_goal = bfs_distances(instance.graph, instance.agents[agent].goal);

    const auto vertex_ok = [&](int v, int t) {
      return from_start[v] != kUnreachable && from_start[v] <= t && to_goal[v] != kUnreachable &&
             to_goal[v] <= T - t;
    };

    std::vector<std::uint8_t>& admissible = reduced.node_admissible[i];
    admissible.assign(network.node_count(), 0);
    for (int t = 0; t <= T; ++t) {
      for (int v = 0; v < V; ++v) {
        if (vertex_ok(v, t)) {
          admissible[network.node_in(v, t)] = 1;
          admissible[network.node_out(v, t)] = 1;
        }
      }
    }
    for (int t = 0; t < T; ++t) {
      for (int e = 0; e < E; ++e) {
        const auto [u, v] = edges[e];
        const bool enter = vertex_ok(u, t) || vertex_ok(v, t);
        const bool leave = vertex_ok(u, t + 1) || vertex_ok(v, t + 1);
        if (enter && leave) {
          admissible[network.gadget_in(e, t)] = 1;
          admissible[network.gadget_out(e, t)] = 1;
        }
      }
    }
    MAPFDL_INVARIANT(admissible[network.commodities[i].source]);
    MAPFDL_INVARIANT(admissible[network.commodities[i].sink]);

    std::vector<int>& arcs = reduced.admissible_arcs[i];
    for (int a = 0; a < static_cast<int>(network.arcs.size()); ++a) {
      if (admissible[network.arcs[a].tail] && admissible[network.arcs[a].head]) arcs.push_back(a);
    }
  }

  reduced.network = std::move(network);
  return reduced;
}

ReducedNetwork unreduced_network(FlowNetwork network) {
  ReducedNetwork reduced;
  const int commodity_count = static_cast<int>(network.commodities.size());
  reduced.node_admissible.assign(commodity_count,
                                 std::vector<std::uint8_t>(network.node_count(), 1));
  std::vector<int> all_arcs(network.arcs.size());
  for (int a = 0; a < static_cast<int>(network.arcs.size()); ++a) all_arcs[a] = a;
  reduced.admissible_arcs.assign(commodity_count, all_arcs);
  reduced.network = std::move(network);
  return reduced;
}

}  // namespace ilp
}  // namespace mapfdl
