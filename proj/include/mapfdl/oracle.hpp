#pragma once

#include <vector>

#include "mapfdl/instance.hpp"

namespace mapfdl {
namespace oracle {

// Ground-truth brute force for tiny instances. Deliberately shares no search
// or collision code with the solvers: agreement between the two routes is
// evidence, not tautology. Size bounds are enforced to keep the joint state
// space enumerable; violations throw std::runtime_error.

inline constexpr int kMaxSubset = 5;
inline constexpr int kMaxVertices = 64;
inline constexpr int kMaxDeadline = 16;

// True iff every agent in `subset` (indices into instance.agents) can
// simultaneously reach its goal at the deadline without vertex or edge
// collisions. Breadth-first over joint-position layers. The empty subset is
// feasible.
bool subset_feasible(const Instance& instance, const std::vector<int>& subset);

// Minimum number of unsuccessful agents: M minus the size of the largest
// feasible subset, found by testing subsets in decreasing-size order.
int brute_force_optimal(const Instance& instance);

}  // namespace oracle
}  // namespace mapfdl
