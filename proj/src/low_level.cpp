#include "mapfdl/low_level.hpp"

#include <algorithm>

#include "mapfdl/invariant.hpp"

namespace mapfdl {

ConstraintIndex::ConstraintIndex(std::span<const Constraint> constraints, int agent,
                                 int vertex_count, int deadline)
    : vertex_count_(static_cast<std::uint64_t>(vertex_count)) {
  for (const Constraint& c : constraints) {
    if (c.agent != agent) continue;
    MAPFDL_INVARIANT(c.time >= 0 && c.time <= deadline);
    if (c.kind == ConstraintKind::vertex) {
      vertex_keys_.insert(key(c.u, c.time));
    } else {
      MAPFDL_INVARIANT(c.time < deadline);
      edge_keys_.insert(edge_key(c.u, c.v, c.time));
    }
  }
}

std::optional<Path> constrained_path(const Instance& instance, int agent,
                                     std::span<const Constraint> constraints,
                                     const std::vector<int>& goal_distances) {
  return detail::constrained_path_opts(instance, agent, constraints, goal_distances, true);
}

namespace detail {

std::optional<Path> constrained_path_opts(const Instance& instance, int agent,
                                          std::span<const Constraint> constraints,
                                          const std::vector<int>& goal_distances,
                                          bool use_deadline_prune) {
  const Graph& graph = instance.graph;
  const int deadline = instance.deadline;
  const int start = instance.agents[agent].start;
  const int goal = instance.agents[agent].goal;
  const int vertex_count = graph.vertex_count();

  const ConstraintIndex index(constraints, agent, vertex_count, deadline);

  const auto admissible = [&](int v, int t) {
    if (!use_deadline_prune) return true;
    const int h = goal_distances[v];
    return h != kUnreachable && t + h <= deadline;
  };

  // Layered reachability over (vertex, t). All arcs cost one time step, so a
  // forward sweep with a parent per state is exact; within a layer vertices
  // are visited in increasing id and the stay move is tried before neighbor
  // moves, which fixes the returned path deterministically.
  const auto state = [&](int v, int t) { return t * vertex_count + v; };
  std::vector<int> parent(static_cast<std::size_t>(deadline + 1) * vertex_count, -2);

  if (!admissible(start, 0) || index.vertex_forbidden(start, 0)) return std::nullopt;
  parent[state(start, 0)] = -1;
  std::vector<int> frontier{start};
  std::vector<int> next;

  for (int t = 0; t < deadline && !frontier.empty(); ++t) {
    next.clear();
    const auto try_move = [&](int u, int v) {
      if (parent[state(v, t + 1)] != -2) return;
      if (!admissible(v, t + 1)) return;
      if (index.vertex_forbidden(v, t + 1)) return;
      if (index.move_forbidden(u, v, t)) return;
      parent[state(v, t + 1)] = u;
      next.push_back(v);
    };
    for (const int u : frontier) {
      try_move(u, u);
      for (const int v : graph.neighbors(u)) try_move(u, v);
    }
    std::sort(next.begin(), next.end());
    frontier.swap(next);
  }

  if (parent[state(goal, deadline)] == -2) return std::nullopt;

  Path path(deadline + 1);
  int v = goal;
  for (int t = deadline; t >= 0; --t) {
    path[t] = v;
    v = parent[state(v, t)];
  }
  MAPFDL_INVARIANT(v == -1);
  MAPFDL_INVARIANT(path.front() == start && path.back() == goal);
  return path;
}

}  // namespace detail

}  // namespace mapfdl
