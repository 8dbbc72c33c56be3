#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mapfdl/instance.hpp"

namespace mapfdl {
namespace test {

// Builds a grid instance from rows of '.'/'@'; agents are (start, goal) cell
// pairs given as (row, col).
inline Instance grid_instance(const std::vector<std::string>& rows,
                              const std::vector<std::array<int, 4>>& agents, int deadline,
                              std::string name = "fixture") {
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  std::vector<std::uint8_t> blocked;
  for (const std::string& row : rows) {
    for (const char c : row) blocked.push_back(c == '@' ? 1 : 0);
  }
  Instance instance;
  instance.graph = Graph::from_grid(height, width, blocked);
  for (const auto& [sr, sc, gr, gc] : agents) {
    instance.agents.push_back(
        AgentTask{instance.graph.vertex_at(sr, sc), instance.graph.vertex_at(gr, gc)});
  }
  instance.deadline = deadline;
  instance.name = std::move(name);
  return instance;
}

// I1: the 3-vertex line A-B-C with a head-on swap and no slack; optimal cost 1.
inline Instance i1() {
  Instance instance;
  instance.graph = Graph::from_edges(3, {{0, 1}, {1, 2}});
  instance.agents = {AgentTask{0, 2}, AgentTask{2, 0}};
  instance.deadline = 2;
  instance.name = "i1";
  return instance;
}

// I2: the 2x2 ring with a diagonal swap; the rotation solves it at cost 0.
// Vertices: (0,0)=0 (0,1)=1 (1,0)=2 (1,1)=3.
inline Instance i2() {
  return grid_instance({"..", ".."}, {{0, 0, 1, 1}, {1, 1, 0, 0}}, 2, "i2");
}

// Uniform random connected-ish graph instance small enough for exhaustive
// checks. Agents get valid (reachable within deadline) start/goal pairs.
inline Instance random_tiny_graph_instance(std::mt19937& rng, int max_vertices = 9,
                                           int max_deadline = 4, int agent_count = 2) {
  while (true) {
    const int n = 2 + static_cast<int>(rng() % (max_vertices - 1));
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (rng() % 100 < 45) edges.emplace_back(u, v);
      }
    }
    Instance instance;
    instance.graph = Graph::from_edges(n, edges);
    instance.deadline = 1 + static_cast<int>(rng() % max_deadline);
    bool ok = true;
    for (int i = 0; i < agent_count && ok; ++i) {
      const int start = static_cast<int>(rng() % n);
      const auto dist = bfs_distances(instance.graph, start);
      std::vector<int> goals;
      for (int v = 0; v < n; ++v) {
        if (dist[v] != kUnreachable && dist[v] <= instance.deadline) goals.push_back(v);
      }
      if (goals.empty()) {
        ok = false;
        break;
      }
      instance.agents.push_back(AgentTask{start, goals[rng() % goals.size()]});
    }
    if (!ok) continue;
    instance.name = "tinygraph";
    return instance;
  }
}

}  // namespace test
}  // namespace mapfdl
