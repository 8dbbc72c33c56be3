#pragma once

#include <map>
#include <span>
#include <vector>

#include "mapfdl/cbs_dl.hpp"

namespace mapfdl {

// Sorted set of simple-agent ids that may simultaneously be successful.
struct AgentGroup {
  std::vector<int> members;  // sorted, no duplicates
};

// Outcome of a group consistency check. When consistent, sub_plan holds a
// zero-cost plan for the group's members (paths only for members).
struct ConsistencyResult {
  enum class Verdict : std::uint8_t { consistent, inconsistent, budget_exhausted };
  Verdict verdict = Verdict::budget_exhausted;
  Plan sub_plan;
};

// Memoizes consistency checks across one death-tree search. The external
// constraint set is fixed per search, so the group alone keys the cache.
class ConsistencyCache {
 public:
  const ConsistencyResult* find(const std::vector<int>& members) const;
  void store(const std::vector<int>& members, ConsistencyResult result);
  std::size_t size() const { return cache_.size(); }

 private:
  std::map<std::vector<int>, ConsistencyResult> cache_;
};

// A group is consistent iff the sub-instance restricted to its members has a
// zero-cost solution under the external constraints, verified by a
// zero-cost-check call to CBS-DL. The empty group is consistent.
ConsistencyResult check_consistent(const Instance& instance, const AgentGroup& group,
                                   const std::vector<Constraint>& external_constraints = {},
                                   ConsistencyCache* cache = nullptr,
                                   const SearchLimits& limits = {});

// Death-Based Search: best-first over death-tree nodes holding disjoint
// groups of live agents; node cost is the number of agents declared
// unsuccessful. Complete and optimal.
SolveResult solve_dbs(const Instance& instance,
                      const std::vector<Constraint>& external_constraints = {},
                      const SearchLimits& limits = {});

// Restricted to a subset of the agents; used as the meta-agent low-level
// search inside MA-DBS. Plan and cost conventions as solve_cbs_dl_subset.
SolveResult solve_dbs_subset(const Instance& instance, std::span<const int> agents,
                             const std::vector<Constraint>& external_constraints,
                             const SearchLimits& limits = {});

}  // namespace mapfdl
