#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "mapfdl/collision.hpp"
#include "mapfdl/instance.hpp"

namespace mapfdl {

// Constant-time membership queries over the constraints binding one agent.
class ConstraintIndex {
 public:
  ConstraintIndex(std::span<const Constraint> constraints, int agent, int vertex_count,
                  int deadline);

  bool vertex_forbidden(int v, int t) const {
    return vertex_keys_.count(key(v, t)) != 0;
  }
  // Move from u at time t to v at time t+1 (u may equal v).
  bool move_forbidden(int u, int v, int t) const {
    return !edge_keys_.empty() && edge_keys_.count(edge_key(u, v, t)) != 0;
  }

 private:
  std::uint64_t key(int v, int t) const {
    return static_cast<std::uint64_t>(t) * vertex_count_ + v;
  }
  std::uint64_t edge_key(int u, int v, int t) const {
    return (static_cast<std::uint64_t>(t) * vertex_count_ + u) * vertex_count_ + v;
  }

  std::uint64_t vertex_count_;
  std::unordered_set<std::uint64_t> vertex_keys_;
  std::unordered_set<std::uint64_t> edge_keys_;
};

// Deadline-bounded single-agent space-time search. Returns a path of length
// exactly deadline + 1 from the agent's start to its goal that obeys every
// constraint on the agent, or absent when no such path exists. States expand
// in non-decreasing time with a closed set over (vertex, t); a successor
// (v', t+1) is generated only when t+1 + goal_distances[v'] <= T_end, v' is
// not vertex-constrained at t+1, and the move is not edge-constrained.
// Waiting at or re-leaving the goal is allowed; the goal test is only
// (vertex == goal && t == T_end).
std::optional<Path> constrained_path(const Instance& instance, int agent,
                                     std::span<const Constraint> constraints,
                                     const std::vector<int>& goal_distances);

namespace detail {

// Test hook: with use_deadline_prune == false the t + h <= T_end prune is
// dropped (differential testing of pruning soundness).
std::optional<Path> constrained_path_opts(const Instance& instance, int agent,
                                          std::span<const Constraint> constraints,
                                          const std::vector<int>& goal_distances,
                                          bool use_deadline_prune);

}  // namespace detail

}  // namespace mapfdl
