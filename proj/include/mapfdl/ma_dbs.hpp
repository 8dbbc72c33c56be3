#pragma once

#include "mapfdl/cbs_dl.hpp"
#include "mapfdl/ma_dbs_types.hpp"

namespace mapfdl {

// True iff the accumulated collision count between the two meta agents
// exceeds the merge threshold B (strict inequality).
bool should_merge(const ConflictMatrix& cm, const MetaAgent& a, const MetaAgent& b,
                  int merge_threshold);

// Drops every constraint whose spawning collision lies entirely inside the
// merged meta agent (DBS resolves those internally) and keeps the rest. The
// survivors stay addressed to their simple members, which is how the meta
// agent's low-level search applies them.
std::vector<Constraint> merge_constraints(const std::vector<Constraint>& node_constraints,
                                          const MetaAgent& merged);

// Meta-Agent DBS: the CBS-DL high level plus a global conflict matrix; pairs
// of meta agents whose accumulated collisions exceed B are merged and planned
// jointly by DBS on the low level. Complete and optimal for every B >= 0.
SolveResult solve_ma_dbs(const Instance& instance, int merge_threshold,
                         const SearchLimits& limits = {});

}  // namespace mapfdl
