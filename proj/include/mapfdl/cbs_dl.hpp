#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mapfdl/collision.hpp"
#include "mapfdl/instance.hpp"
#include "mapfdl/plan.hpp"

namespace mapfdl {

enum class SolveStatus : std::uint8_t {
  solved,
  inconsistent,      // zero-cost check only: no all-successful plan exists
  budget_exhausted,  // node budget, deadline, or cancellation hit
};

struct SolveResult {
  SolveStatus status = SolveStatus::budget_exhausted;
  Plan plan;     // meaningful when solved
  int cost = 0;  // unsuccessful agents among the solved-for set
  std::int64_t nodes_expanded = 0;
  // Cost of every node chosen for expansion, in order; the solvers assert the
  // sequence is non-decreasing as they run.
  std::vector<int> expansion_costs;
};

// Cooperative termination: an optional high-level expansion budget, an
// optional wall-clock deadline polled once per expansion, and an optional
// external kill switch (used by the benchmark watchdog).
struct SearchLimits {
  std::optional<std::int64_t> node_budget;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const std::atomic<bool>* cancel = nullptr;

  bool stop_requested(std::int64_t nodes_expanded) const {
    if (node_budget && nodes_expanded > *node_budget) return true;
    if (cancel && cancel->load(std::memory_order_relaxed)) return true;
    if (deadline && std::chrono::steady_clock::now() > *deadline) return true;
    return false;
  }
};

enum class CbsMode : std::uint8_t {
  full,             // run to an optimal solution
  zero_cost_check,  // report `inconsistent` as soon as a nonzero-cost node is chosen
};

// High-level constraint-tree search minimizing the number of unsuccessful
// agents. external_constraints apply from the root on; they are empty for
// standalone solving and nonempty when DBS checks a meta agent's members.
SolveResult solve_cbs_dl(const Instance& instance,
                         const std::vector<Constraint>& external_constraints = {},
                         CbsMode mode = CbsMode::full, const SearchLimits& limits = {});

// Same search restricted to a subset of the agents (ids into
// instance.agents, sorted). The returned plan is sized for all agents with
// paths only for subset members; cost counts unsuccessful subset members.
SolveResult solve_cbs_dl_subset(const Instance& instance, std::span<const int> agents,
                                const std::vector<Constraint>& external_constraints,
                                CbsMode mode = CbsMode::full, const SearchLimits& limits = {});

}  // namespace mapfdl
