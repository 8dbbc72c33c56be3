#include "mapfdl/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace mapfdl {
namespace oracle {

namespace {

// Self-contained BFS so the oracle does not lean on the solvers' helpers.
std::vector<int> distances_from(const Graph& graph, int source) {
  std::vector<int> dist(graph.vertex_count(), -1);
  dist[source] = 0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const int v : graph.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

void check_bounds(const Instance& instance, std::size_t subset_size) {
  if (subset_size > kMaxSubset)
    throw std::runtime_error("oracle: subset larger than " + std::to_string(kMaxSubset));
  if (instance.graph.vertex_count() > kMaxVertices)
    throw std::runtime_error("oracle: graph larger than " + std::to_string(kMaxVertices) +
                             " vertices");
  if (instance.deadline > kMaxDeadline)
    throw std::runtime_error("oracle: deadline beyond " + std::to_string(kMaxDeadline));
}

std::uint64_t pack(const std::vector<int>& positions) {
  std::uint64_t key = 0;
  for (const int p : positions) key = key * 64 + static_cast<std::uint64_t>(p);
  return key;
}

}  // namespace

bool subset_feasible(const Instance& instance, const std::vector<int>& subset) {
  check_bounds(instance, subset.size());
  if (subset.empty()) return true;

  const Graph& graph = instance.graph;
  const int k = static_cast<int>(subset.size());
  const int deadline = instance.deadline;

  // Per-member corridor masks: a member may stand at v at time t only when v
  // is reachable from its start in <= t steps and its goal is reachable from
  // v in <= T - t steps. This prunes the joint space without changing which
  // joint trajectories exist.
  std::vector<std::vector<int>> from_start(k), to_goal(k);
  for (int m = 0; m < k; ++m) {
    from_start[m] = distances_from(graph, instance.agents[subset[m]].start);
    to_goal[m] = distances_from(graph, instance.agents[subset[m]].goal);
  }
  const auto allowed = [&](int m, int v, int t) {
    return from_start[m][v] >= 0 && from_start[m][v] <= t && to_goal[m][v] >= 0 &&
           to_goal[m][v] <= deadline - t;
  };

  std::vector<int> start(k);
  for (int m = 0; m < k; ++m) start[m] = instance.agents[subset[m]].start;
  for (int m = 0; m < k; ++m) {
    for (int n = m + 1; n < k; ++n) {
      if (start[m] == start[n]) return false;  // vertex collision at t = 0
    }
  }
  for (int m = 0; m < k; ++m) {
    if (!allowed(m, start[m], 0)) return false;
  }

  std::vector<std::vector<int>> layer{start};
  for (int t = 0; t < deadline; ++t) {
    std::vector<std::vector<int>> next_layer;
    std::unordered_set<std::uint64_t> seen;
    for (const std::vector<int>& joint : layer) {
      // Enumerate all joint moves (stay or step) member by member.
      std::vector<int> choice(k, -1);
      std::vector<int> positions(k);
      const auto options = [&](int m) {
        std::vector<int> opts{joint[m]};
        const auto& nbrs = graph.neighbors(joint[m]);
        opts.insert(opts.end(), nbrs.begin(), nbrs.end());
        return opts;
      };
      std::vector<std::vector<int>> opts(k);
      for (int m = 0; m < k; ++m) opts[m] = options(m);

      std::vector<int> idx(k, 0);
      while (true) {
        bool ok = true;
        for (int m = 0; m < k && ok; ++m) {
          positions[m] = opts[m][idx[m]];
          if (!allowed(m, positions[m], t + 1)) ok = false;
          for (int n = 0; n < m && ok; ++n) {
            if (positions[n] == positions[m]) ok = false;  // vertex collision
            // Edge collision: m and n traverse the same edge in opposite
            // directions between t and t+1.
            if (positions[m] == joint[n] && positions[n] == joint[m] && joint[m] != joint[n])
              ok = false;
          }
        }
        if (ok) {
          const std::uint64_t key = pack(positions);
          if (seen.insert(key).second) next_layer.push_back(positions);
        }
        int m = k - 1;
        while (m >= 0 && ++idx[m] == static_cast<int>(opts[m].size())) idx[m--] = 0;
        if (m < 0) break;
      }
    }
    layer.swap(next_layer);
    if (layer.empty()) return false;
  }

  std::vector<int> goals(k);
  for (int m = 0; m < k; ++m) goals[m] = instance.agents[subset[m]].goal;
  return std::any_of(layer.begin(), layer.end(),
                     [&](const std::vector<int>& joint) { return joint == goals; });
}

int brute_force_optimal(const Instance& instance) {
  const int agent_count = instance.agent_count();
  if (agent_count > kMaxSubset)
    throw std::runtime_error("oracle: more than " + std::to_string(kMaxSubset) + " agents");

  for (int size = agent_count; size >= 1; --size) {
    // All subsets of the given size, in lexicographic order.
    std::vector<int> subset(size);
    for (int m = 0; m < size; ++m) subset[m] = m;
    while (true) {
      if (subset_feasible(instance, subset)) return agent_count - size;
      int m = size - 1;
      while (m >= 0 && subset[m] == agent_count - size + m) --m;
      if (m < 0) break;
      ++subset[m];
      for (int n = m + 1; n < size; ++n) subset[n] = subset[n - 1] + 1;
    }
  }
  return agent_count;
}

}  // namespace oracle
}  // namespace mapfdl
