#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mapfdl/cbs_dl.hpp"
#include "mapfdl/ma_dbs_types.hpp"

namespace mapfdl {
namespace detail {

// Meta-agent machinery threaded through the shared high-level search. When
// null the search is plain CBS-DL; when present it is MA-DBS: collisions bump
// the global conflict matrix, pairs over the merge threshold become meta
// agents, and non-singleton meta agents replan through `meta_solver` (DBS).
struct MetaContext {
  int merge_threshold = 0;  // B
  ConflictMatrix* cm = nullptr;
  MetaPartition* partition = nullptr;
  // Solve the sub-MAPF-DL over `members` under member-addressed external
  // constraints; must return max-paths plans (DBS in full mode).
  std::function<SolveResult(std::span<const int> members,
                            const std::vector<Constraint>& external, const SearchLimits&)>
      meta_solver;
};

SolveResult high_level_search(const Instance& instance, std::span<const int> agents,
                              const std::vector<Constraint>& external_constraints, CbsMode mode,
                              const SearchLimits& limits, MetaContext* meta);

}  // namespace detail
}  // namespace mapfdl
