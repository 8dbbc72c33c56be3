#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <utility>
#include <vector>

#include "mapfdl/invariant.hpp"

namespace mapfdl {

// A merged set of simple agents planned jointly by DBS. Singleton meta agents
// behave exactly as simple agents.
struct MetaAgent {
  int id = -1;                // canonical id: the smallest member
  std::vector<int> members;   // sorted simple-agent ids
};

// Global symmetric counter of collisions considered per simple-agent pair,
// accumulated over the whole MA-DBS search.
class ConflictMatrix {
 public:
  explicit ConflictMatrix(int agent_count)
      : agent_count_(agent_count),
        counts_(static_cast<std::size_t>(agent_count) * agent_count, 0) {}

  void bump(int a, int b) {
    MAPFDL_INVARIANT(a != b);
    ++counts_[index(a, b)];
  }
  std::int64_t count(int a, int b) const { return a == b ? 0 : counts_[index(a, b)]; }

  std::int64_t pair_sum(const std::vector<int>& left, const std::vector<int>& right) const {
    std::int64_t sum = 0;
    for (const int a : left) {
      for (const int b : right) sum += count(a, b);
    }
    return sum;
  }

 private:
  std::size_t index(int a, int b) const {
    if (a > b) std::swap(a, b);
    return static_cast<std::size_t>(a) * agent_count_ + b;
  }

  int agent_count_;
  std::vector<std::int64_t> counts_;
};

// Partition of the simple agents into meta agents. Global across the search;
// merging only coarsens it, never splits.
class MetaPartition {
 public:
  explicit MetaPartition(int agent_count) : root_(agent_count), members_(agent_count) {
    for (int i = 0; i < agent_count; ++i) {
      root_[i] = i;
      members_[i] = {i};
    }
  }

  int find(int agent) const {
    while (root_[agent] != agent) agent = root_[agent];
    return agent;
  }

  // Sorted members of the meta agent containing `agent`.
  const std::vector<int>& members(int agent) const { return members_[find(agent)]; }

  MetaAgent meta(int agent) const {
    const int r = find(agent);
    return MetaAgent{members_[r].front(), members_[r]};
  }

  // Merges the meta agents containing a and b; returns the new root. The root
  // is the meta agent with the smallest member.
  int unite(int a, int b) {
    int ra = find(a);
    int rb = find(b);
    MAPFDL_INVARIANT(ra != rb);
    if (members_[rb].front() < members_[ra].front()) std::swap(ra, rb);
    root_[rb] = ra;
    std::vector<int> merged;
    merged.reserve(members_[ra].size() + members_[rb].size());
    std::merge(members_[ra].begin(), members_[ra].end(), members_[rb].begin(),
               members_[rb].end(), std::back_inserter(merged));
    members_[ra] = std::move(merged);
    members_[rb].clear();
    return ra;
  }

 private:
  std::vector<int> root_;
  std::vector<std::vector<int>> members_;
};

}  // namespace mapfdl
