#include "mapfdl/dbs.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <queue>
#include <set>

#include "mapfdl/invariant.hpp"

namespace mapfdl {

const ConsistencyResult* ConsistencyCache::find(const std::vector<int>& members) const {
  const auto it = cache_.find(members);
  return it == cache_.end() ? nullptr : &it->second;
}

void ConsistencyCache::store(const std::vector<int>& members, ConsistencyResult result) {
  cache_.emplace(members, std::move(result));
}

ConsistencyResult check_consistent(const Instance& instance, const AgentGroup& group,
                                   const std::vector<Constraint>& external_constraints,
                                   ConsistencyCache* cache, const SearchLimits& limits) {
  if (group.members.empty()) {
    return {ConsistencyResult::Verdict::consistent, Plan(instance.agent_count())};
  }
  if (cache) {
    if (const ConsistencyResult* hit = cache->find(group.members)) return *hit;
  }

  std::vector<Constraint> relevant;
  for (const Constraint& c : external_constraints) {
    if (std::binary_search(group.members.begin(), group.members.end(), c.agent))
      relevant.push_back(c);
  }

  const SolveResult sub = solve_cbs_dl_subset(instance, group.members, relevant,
                                              CbsMode::zero_cost_check, limits);
  ConsistencyResult result;
  switch (sub.status) {
    case SolveStatus::solved:
      MAPFDL_INVARIANT(sub.cost == 0);
      result.verdict = ConsistencyResult::Verdict::consistent;
      result.sub_plan = sub.plan;
      break;
    case SolveStatus::inconsistent:
      result.verdict = ConsistencyResult::Verdict::inconsistent;
      break;
    case SolveStatus::budget_exhausted:
      return result;  // not cached: a later call may have more budget
  }
  if (cache) cache->store(group.members, result);
  return result;
}

namespace {

struct DtNode {
  std::vector<AgentGroup> live;  // sorted by smallest member
  std::vector<int> dead;         // sorted
  int cost = 0;                  // == dead.size()
  std::int64_t seq = 0;
};

using DtNodePtr = std::shared_ptr<DtNode>;

// OPEN order: cost, then fewer live groups, then FIFO.
struct DtNodeWorse {
  bool operator()(const DtNodePtr& a, const DtNodePtr& b) const {
    if (a->cost != b->cost) return a->cost > b->cost;
    if (a->live.size() != b->live.size()) return a->live.size() > b->live.size();
    return a->seq > b->seq;
  }
};

void sort_groups(std::vector<AgentGroup>& groups) {
  std::sort(groups.begin(), groups.end(), [](const AgentGroup& a, const AgentGroup& b) {
    return a.members.front() < b.members.front();
  });
}

// Canonical key for duplicate detection: the dead set plus the live
// partition, both in canonical order.
std::vector<int> node_key(const DtNode& node) {
  std::vector<int> key;
  key.push_back(static_cast<int>(node.dead.size()));
  key.insert(key.end(), node.dead.begin(), node.dead.end());
  for (const AgentGroup& group : node.live) {
    key.push_back(-1);  // group separator; member ids are >= 0
    key.insert(key.end(), group.members.begin(), group.members.end());
  }
  return key;
}

// Structural invariants: groups nonempty, pairwise disjoint, and live + dead
// partition exactly the solved-for agent set.
void check_partition(const DtNode& node, const std::vector<int>& agents) {
  std::vector<int> all(node.dead);
  for (const AgentGroup& group : node.live) {
    MAPFDL_INVARIANT(!group.members.empty());
    MAPFDL_INVARIANT(std::is_sorted(group.members.begin(), group.members.end()));
    all.insert(all.end(), group.members.begin(), group.members.end());
  }
  std::sort(all.begin(), all.end());
  MAPFDL_INVARIANT(all == agents);
  MAPFDL_INVARIANT(node.cost == static_cast<int>(node.dead.size()));
}

class DeathTreeSearch {
 public:
  DeathTreeSearch(const Instance& instance, std::span<const int> agents,
                  const std::vector<Constraint>& external_constraints,
                  const SearchLimits& limits)
      : instance_(instance),
        agents_(agents.begin(), agents.end()),
        external_constraints_(external_constraints),
        limits_(limits) {}

  SolveResult run() {
    SolveResult result;
    auto root = std::make_shared<DtNode>();
    for (const int agent : agents_) root->live.push_back(AgentGroup{{agent}});
    root->seq = next_seq_++;
    seen_.insert(node_key(*root));
    open_.push(std::move(root));

    int last_expanded_cost = 0;
    while (true) {
      MAPFDL_INVARIANT(!open_.empty());
      if (limits_.stop_requested(result.nodes_expanded + 1)) return result;
      ++result.nodes_expanded;

      DtNodePtr node = open_.top();
      open_.pop();
      check_partition(*node, agents_);

      // Best-first over monotone child costs: expansion costs never decrease.
      MAPFDL_INVARIANT(node->cost >= last_expanded_cost);
      last_expanded_cost = node->cost;
      result.expansion_costs.push_back(node->cost);

      // The death tree's own budget does not bound the inner CBS-DL calls;
      // only the wall clock and the kill switch propagate downward.
      SearchLimits inner = limits_;
      inner.node_budget.reset();

      // Find the first inconsistent group in scan order.
      const AgentGroup* inconsistent = nullptr;
      ConsistencyResult single_group_check;
      bool exhausted = false;
      for (const AgentGroup& group : node->live) {
        ConsistencyResult check =
            check_consistent(instance_, group, external_constraints_, &cache_, inner);
        if (check.verdict == ConsistencyResult::Verdict::budget_exhausted) {
          exhausted = true;
          break;
        }
        if (check.verdict == ConsistencyResult::Verdict::inconsistent) {
          inconsistent = &group;
          break;
        }
        if (node->live.size() == 1) single_group_check = std::move(check);
      }
      if (exhausted) return result;

      if (!inconsistent) {
        if (node->live.size() <= 1) {
          // Goal node: the zero-cost sub-plan for the single live group,
          // joined with dead markers (dead agents hold no path).
          result.status = SolveStatus::solved;
          result.plan = Plan(instance_.agent_count());
          if (!node->live.empty()) {
            for (const int member : node->live.front().members)
              result.plan.paths[member] = single_group_check.sub_plan.paths[member];
          }
          result.cost = node->cost;
          return result;
        }
        // All groups consistent: merge the two smallest groups (size, then
        // smallest member id) into an equal-cost only child.
        std::vector<const AgentGroup*> order;
        order.reserve(node->live.size());
        for (const AgentGroup& group : node->live) order.push_back(&group);
        std::sort(order.begin(), order.end(), [](const AgentGroup* a, const AgentGroup* b) {
          if (a->members.size() != b->members.size()) return a->members.size() < b->members.size();
          return a->members.front() < b->members.front();
        });
        auto child = std::make_shared<DtNode>();
        child->dead = node->dead;
        child->cost = node->cost;
        AgentGroup merged;
        std::merge(order[0]->members.begin(), order[0]->members.end(), order[1]->members.begin(),
                   order[1]->members.end(), std::back_inserter(merged.members));
        for (const AgentGroup& group : node->live) {
          if (&group != order[0] && &group != order[1]) child->live.push_back(group);
        }
        child->live.push_back(std::move(merged));
        sort_groups(child->live);
        // A merge child has one fewer group than the parent, same live agents.
        MAPFDL_INVARIANT(child->live.size() + 1 == node->live.size());
        push_child(std::move(child));
        continue;
      }

      // Split: one child per member of the first inconsistent group; each
      // child declares its own unique agent unsuccessful and costs one more.
      for (const int victim : inconsistent->members) {
        auto child = std::make_shared<DtNode>();
        child->dead = node->dead;
        child->dead.insert(std::upper_bound(child->dead.begin(), child->dead.end(), victim),
                           victim);
        child->cost = node->cost + 1;
        for (const AgentGroup& group : node->live) {
          if (&group != inconsistent) {
            child->live.push_back(group);
            continue;
          }
          AgentGroup rest;
          for (const int member : group.members) {
            if (member != victim) rest.members.push_back(member);
          }
          if (!rest.members.empty()) child->live.push_back(std::move(rest));
        }
        sort_groups(child->live);
        // A split child has one fewer live agent than the parent.
        MAPFDL_INVARIANT(child->cost == node->cost + 1);
        push_child(std::move(child));
      }
    }
  }

 private:
  // Identical states can be regenerated along different split orders; they
  // carry the same cost by construction, so discarding repeats is safe.
  void push_child(DtNodePtr child) {
    if (!seen_.insert(node_key(*child)).second) return;
    check_partition(*child, agents_);
    child->seq = next_seq_++;
    open_.push(std::move(child));
  }

  const Instance& instance_;
  std::vector<int> agents_;
  const std::vector<Constraint>& external_constraints_;
  SearchLimits limits_;
  ConsistencyCache cache_;
  std::priority_queue<DtNodePtr, std::vector<DtNodePtr>, DtNodeWorse> open_;
  std::set<std::vector<int>> seen_;
  std::int64_t next_seq_ = 0;
};

}  // namespace

SolveResult solve_dbs(const Instance& instance,
                      const std::vector<Constraint>& external_constraints,
                      const SearchLimits& limits) {
  std::vector<int> all(instance.agent_count());
  std::iota(all.begin(), all.end(), 0);
  return solve_dbs_subset(instance, all, external_constraints, limits);
}

SolveResult solve_dbs_subset(const Instance& instance, std::span<const int> agents,
                             const std::vector<Constraint>& external_constraints,
                             const SearchLimits& limits) {
  return DeathTreeSearch(instance, agents, external_constraints, limits).run();
}

}  // namespace mapfdl
