#include "mapfdl/ma_dbs.hpp"

#include <algorithm>
#include <numeric>

#include "mapfdl/dbs.hpp"
#include "mapfdl/detail/high_level.hpp"
#include "mapfdl/invariant.hpp"

namespace mapfdl {

bool should_merge(const ConflictMatrix& cm, const MetaAgent& a, const MetaAgent& b,
                  int merge_threshold) {
  MAPFDL_INVARIANT(a.id != b.id);
  return cm.pair_sum(a.members, b.members) > merge_threshold;
}

std::vector<Constraint> merge_constraints(const std::vector<Constraint>& node_constraints,
                                          const MetaAgent& merged) {
  std::vector<Constraint> kept;
  kept.reserve(node_constraints.size());
  for (const Constraint& c : node_constraints) {
    const bool internal =
        std::binary_search(merged.members.begin(), merged.members.end(), c.spawned_from.first) &&
        std::binary_search(merged.members.begin(), merged.members.end(), c.spawned_from.second);
    if (!internal) kept.push_back(c);
  }
  return kept;
}

SolveResult solve_ma_dbs(const Instance& instance, int merge_threshold,
                         const SearchLimits& limits) {
  MAPFDL_INVARIANT(merge_threshold >= 0);
  ConflictMatrix cm(instance.agent_count());
  MetaPartition partition(instance.agent_count());

  detail::MetaContext meta;
  meta.merge_threshold = merge_threshold;
  meta.cm = &cm;
  meta.partition = &partition;
  meta.meta_solver = [&instance](std::span<const int> members,
                                 const std::vector<Constraint>& external,
                                 const SearchLimits& inner) {
    return solve_dbs_subset(instance, members, external, inner);
  };

  std::vector<int> all(instance.agent_count());
  std::iota(all.begin(), all.end(), 0);
  return detail::high_level_search(instance, all, {}, CbsMode::full, limits, &meta);
}

}  // namespace mapfdl
