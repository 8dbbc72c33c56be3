#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mapfdl/instance.hpp"
#include "mapfdl/plan.hpp"

namespace mapfdl {

enum class CollisionKind : std::uint8_t { vertex, edge };

// A vertex collision (i, j, v, t): both agents occupy v at t (u == v here).
// An edge collision (i, j, u, v, t): u = l_i(t) = l_j(t+1), v = l_j(t) = l_i(t+1),
// i.e. the agents traverse edge {u, v} in opposite directions between t and t+1.
struct Collision {
  CollisionKind kind = CollisionKind::vertex;
  int agent_a = -1;  // agent_a < agent_b
  int agent_b = -1;
  int u = -1;
  int v = -1;
  int time = -1;

  friend bool operator==(const Collision&, const Collision&) = default;
};

enum class ConstraintKind : std::uint8_t { vertex, edge };

// A vertex constraint (agent, v, t) forbids occupying v at t; an edge
// constraint (agent, u, v, t) forbids being at u at t and at v at t+1.
// spawned_from records the simple-agent pair whose collision created the
// constraint; MA-DBS uses it to classify constraints as internal or external
// to a meta agent.
struct Constraint {
  ConstraintKind kind = ConstraintKind::vertex;
  int agent = -1;
  int u = -1;
  int v = -1;  // == u for vertex constraints
  int time = -1;
  std::pair<int, int> spawned_from{-1, -1};  // first < second
};

// Equality of the prohibition itself; provenance (spawned_from) is ignored.
inline bool same_prohibition(const Constraint& a, const Constraint& b) {
  return a.kind == b.kind && a.agent == b.agent && a.u == b.u && a.v == b.v && a.time == b.time;
}

std::string describe(const Collision& collision);
std::string describe(const Constraint& constraint);

// First collision under the total order (t, vertex before edge, agent_a,
// agent_b, location). Only pairs of successful agents are checked; agents
// without a path are removed at time step zero. Absent iff the plan is a
// solution (given per-path invariants hold).
std::optional<Collision> find_first_collision(const Instance& instance, const Plan& plan);

// All collisions in the same order, up to max_count. Robust against paths of
// the wrong length (checks the overlapping prefix), so validate_plan can
// enumerate collisions alongside per-path violations.
std::vector<Collision> find_collisions(const Instance& instance, const Plan& plan,
                                       std::size_t max_count = static_cast<std::size_t>(-1));

struct ValidationReport {
  std::vector<std::string> path_violations;
  std::vector<Collision> collisions;

  bool ok() const { return path_violations.empty() && collisions.empty(); }
};

// ok iff every present path obeys the start/goal/adjacency/length invariants
// and the plan has no collision. Violations are data, not errors.
ValidationReport validate_plan(const Instance& instance, const Plan& plan);

}  // namespace mapfdl
