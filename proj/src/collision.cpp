#include "mapfdl/collision.hpp"

#include <algorithm>
#include <sstream>

namespace mapfdl {

std::string describe(const Collision& collision) {
  std::ostringstream out;
  if (collision.kind == CollisionKind::vertex) {
    out << "vertex collision agents (" << collision.agent_a << "," << collision.agent_b
        << ") at vertex " << collision.u << " time " << collision.time;
  } else {
    out << "edge collision agents (" << collision.agent_a << "," << collision.agent_b
        << ") swap (" << collision.u << "," << collision.v << ") time " << collision.time;
  }
  return out.str();
}

std::string describe(const Constraint& constraint) {
  std::ostringstream out;
  if (constraint.kind == ConstraintKind::vertex) {
    out << "vertex constraint agent " << constraint.agent << " vertex " << constraint.u
        << " time " << constraint.time;
  } else {
    out << "edge constraint agent " << constraint.agent << " move (" << constraint.u << "->"
        << constraint.v << ") time " << constraint.time;
  }
  return out.str();
}

namespace {

// Enumerates collisions in the canonical order (t, vertex before edge,
// agent_a, agent_b). For a fixed (t, kind, i, j) the location is unique, so
// this order is total. Stops early once max_count collisions are found.
template <typename Sink>
void scan_collisions(const Plan& plan, int deadline, Sink&& sink) {
  const int agent_count = plan.agent_count();
  std::vector<int> live;
  live.reserve(agent_count);
  for (int i = 0; i < agent_count; ++i) {
    if (plan.paths[i]) live.push_back(i);
  }

  const auto at = [&](int agent, int t) -> int {
    const Path& path = *plan.paths[agent];
    return t < static_cast<int>(path.size()) ? path[t] : -1;
  };

  for (int t = 0; t <= deadline; ++t) {
    for (std::size_t x = 0; x < live.size(); ++x) {
      for (std::size_t y = x + 1; y < live.size(); ++y) {
        const int i = live[x];
        const int j = live[y];
        const int vi = at(i, t);
        const int vj = at(j, t);
        if (vi >= 0 && vi == vj) {
          if (!sink(Collision{CollisionKind::vertex, i, j, vi, vi, t})) return;
        }
      }
    }
    if (t == deadline) break;
    for (std::size_t x = 0; x < live.size(); ++x) {
      for (std::size_t y = x + 1; y < live.size(); ++y) {
        const int i = live[x];
        const int j = live[y];
        const int ui = at(i, t);
        const int uj = at(j, t);
        const int wi = at(i, t + 1);
        const int wj = at(j, t + 1);
        if (ui >= 0 && wi >= 0 && uj >= 0 && wj >= 0 && ui != uj && ui == wj && uj == wi) {
          if (!sink(Collision{CollisionKind::edge, i, j, ui, uj, t})) return;
        }
      }
    }
  }
}

}  // namespace

std::optional<Collision> find_first_collision(const Instance& instance, const Plan& plan) {
  std::optional<Collision> first;
  scan_collisions(plan, instance.deadline, [&](const Collision& c) {
    first = c;
    return false;  // stop at the first one
  });
  return first;
}

std::vector<Collision> find_collisions(const Instance& instance, const Plan& plan,
                                       std::size_t max_count) {
  std::vector<Collision> all;
  scan_collisions(plan, instance.deadline, [&](const Collision& c) {
    all.push_back(c);
    return all.size() < max_count;
  });
  return all;
}

ValidationReport validate_plan(const Instance& instance, const Plan& plan) {
  ValidationReport report;
  const auto complain = [&](int agent, const std::string& what) {
    report.path_violations.push_back("agent " + std::to_string(agent) + ": " + what);
  };

  if (plan.agent_count() != instance.agent_count()) {
    report.path_violations.push_back("plan has " + std::to_string(plan.agent_count()) +
                                     " agents, instance has " +
                                     std::to_string(instance.agent_count()));
    return report;
  }

  for (int i = 0; i < plan.agent_count(); ++i) {
    if (!plan.paths[i]) continue;
    const Path& path = *plan.paths[i];
    if (static_cast<int>(path.size()) != instance.deadline + 1) {
      complain(i, "path length " + std::to_string(path.size()) + ", expected " +
                      std::to_string(instance.deadline + 1));
    }
    for (const int v : path) {
      if (v < 0 || v >= instance.graph.vertex_count()) {
        complain(i, "path visits unknown vertex " + std::to_string(v));
        break;
      }
    }
    if (!path.empty()) {
      if (path.front() != instance.agents[i].start)
        complain(i, "path does not start at the agent's start vertex");
      if (static_cast<int>(path.size()) == instance.deadline + 1 &&
          path.back() != instance.agents[i].goal)
        complain(i, "path does not end at the agent's goal vertex");
    }
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      const int u = path[t];
      const int v = path[t + 1];
      if (u < 0 || v < 0 || u >= instance.graph.vertex_count() ||
          v >= instance.graph.vertex_count())
        break;
      if (u != v && !instance.graph.has_edge(u, v)) {
        complain(i, "non-adjacent move " + std::to_string(u) + "->" + std::to_string(v) +
                        " at time " + std::to_string(t));
      }
    }
  }

  report.collisions = find_collisions(instance, plan);
  return report;
}

}  // namespace mapfdl
