#pragma once

#include <optional>
#include <vector>

namespace mapfdl {

// Vertex occupied at each time step t = 0..T_end; length is deadline + 1.
using Path = std::vector<int>;

// Per-agent optional path. An absent path marks an unsuccessful agent, which
// is removed at time step zero and takes part in no collision check.
struct Plan {
  std::vector<std::optional<Path>> paths;

  Plan() = default;
  explicit Plan(int agent_count) : paths(agent_count) {}

  int agent_count() const { return static_cast<int>(paths.size()); }
  int successful() const {
    int n = 0;
    for (const auto& p : paths) n += p.has_value() ? 1 : 0;
    return n;
  }
};

// Number of unsuccessful agents (the plan cost M_unsucc).
inline int plan_cost(const Plan& plan) { return plan.agent_count() - plan.successful(); }

}  // namespace mapfdl
