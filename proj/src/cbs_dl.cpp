#include "mapfdl/cbs_dl.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <queue>

#include "mapfdl/detail/high_level.hpp"
#include "mapfdl/invariant.hpp"
#include "mapfdl/low_level.hpp"
#include "mapfdl/ma_dbs.hpp"

namespace mapfdl {
namespace detail {

namespace {

struct CtNode {
  std::vector<Constraint> constraints;
  Plan plan;
  int cost = 0;
  int collision_count = 0;
  std::int64_t seq = 0;
};

using CtNodePtr = std::shared_ptr<CtNode>;

// OPEN order: cost, then fewer collisions in the plan, then FIFO.
struct CtNodeWorse {
  bool operator()(const CtNodePtr& a, const CtNodePtr& b) const {
    if (a->cost != b->cost) return a->cost > b->cost;
    if (a->collision_count != b->collision_count) return a->collision_count > b->collision_count;
    return a->seq > b->seq;
  }
};

// Per-goal BFS distance maps, computed once and shared by every low-level
// search of the same agent.
class GoalDistances {
 public:
  explicit GoalDistances(const Instance& instance) : instance_(instance) {}

  const std::vector<int>& for_agent(int agent) {
    const int goal = instance_.agents[agent].goal;
    auto [it, inserted] = by_goal_.try_emplace(goal);
    if (inserted) it->second = bfs_distances(instance_.graph, goal);
    return it->second;
  }

 private:
  const Instance& instance_;
  std::unordered_map<int, std::vector<int>> by_goal_;
};

class HighLevelSearch {
 public:
  HighLevelSearch(const Instance& instance, std::span<const int> agents,
                  const std::vector<Constraint>& external_constraints, CbsMode mode,
                  const SearchLimits& limits, MetaContext* meta)
      : instance_(instance),
        agents_(agents.begin(), agents.end()),
        mode_(mode),
        limits_(limits),
        meta_(meta),
        goal_distances_(instance),
        external_constraints_(external_constraints) {}

  SolveResult run() {
    SolveResult result;
    auto root = std::make_shared<CtNode>();
    root->constraints = external_constraints_;
    root->plan = Plan(instance_.agent_count());
    for (const int agent : agents_) {
      if (!replan_simple(*root, agent)) return result;  // budget during root build
    }
    finish_node(*root);
    open_.push(std::move(root));

    int last_expanded_cost = 0;
    while (true) {
      MAPFDL_INVARIANT(!open_.empty());
      if (limits_.stop_requested(result.nodes_expanded + 1)) return result;
      ++result.nodes_expanded;

      CtNodePtr node = open_.top();
      open_.pop();

      if (mode_ == CbsMode::zero_cost_check && node->cost > 0) {
        result.status = SolveStatus::inconsistent;
        return result;
      }

      const std::optional<Collision> collision = find_first_collision(instance_, node->plan);

      if (meta_ && collision) {
        // Conflict matrix bookkeeping and the merge gate (red lines of the
        // high level). A merged or refreshed node goes back to OPEN instead
        // of being expanded.
        meta_->cm->bump(collision->agent_a, collision->agent_b);
        const int ra = meta_->partition->find(collision->agent_a);
        const int rb = meta_->partition->find(collision->agent_b);
        bool replan_meta_root = false;
        int meta_root = -1;
        if (ra == rb) {
          // The node's plan predates a merge done elsewhere in the search:
          // the collision is internal under the current partition. Normalize
          // the node: keep external constraints only and let DBS replan the
          // meta agent.
          replan_meta_root = true;
          meta_root = ra;
        } else if (should_merge(*meta_->cm, meta_->partition->meta(collision->agent_a),
                                meta_->partition->meta(collision->agent_b),
                                meta_->merge_threshold)) {
          meta_root = meta_->partition->unite(collision->agent_a, collision->agent_b);
          replan_meta_root = true;
        }
        if (replan_meta_root) {
          const std::vector<int>& members = meta_->partition->members(meta_root);
          node->constraints = merge_constraints(node->constraints,
                                                MetaAgent{members.front(), members});
          if (!replan_members(*node, members)) return result;
          finish_node(*node);
          open_.push(std::move(node));
          continue;
        }
      }

      // Expansion costs never decrease under best-first order.
      MAPFDL_INVARIANT(node->cost >= last_expanded_cost);
      last_expanded_cost = node->cost;
      result.expansion_costs.push_back(node->cost);

      if (!collision) {
        result.status = SolveStatus::solved;
        result.plan = node->plan;
        result.cost = node->cost;
        return result;
      }

      // Two children, the agent with the smaller id first.
      for (const int side : {collision->agent_a, collision->agent_b}) {
        Constraint added;
        added.agent = side;
        added.time = collision->time;
        added.spawned_from = {collision->agent_a, collision->agent_b};
        if (collision->kind == CollisionKind::vertex) {
          added.kind = ConstraintKind::vertex;
          added.u = added.v = collision->u;
        } else {
          added.kind = ConstraintKind::edge;
          // agent_a moves u->v, agent_b moves v->u.
          added.u = side == collision->agent_a ? collision->u : collision->v;
          added.v = side == collision->agent_a ? collision->v : collision->u;
        }

        // The child constraint set strictly contains the parent's, and the
        // parent plan violates the newly added constraint.
        MAPFDL_INVARIANT(std::none_of(node->constraints.begin(), node->constraints.end(),
                                      [&](const Constraint& c) {
                                        return same_prohibition(c, added);
                                      }));
        MAPFDL_INVARIANT(plan_violates(node->plan, added));

        auto child = std::make_shared<CtNode>();
        child->constraints = node->constraints;
        child->constraints.push_back(added);
        child->plan = node->plan;
        if (!replan_agent(*child, side)) return result;
        finish_node(*child);
        // A child never costs less than its parent.
        MAPFDL_INVARIANT(child->cost >= node->cost);
        open_.push(std::move(child));
      }
    }
  }

 private:
  // Replans one simple agent; clears its path when no constrained path exists.
  bool replan_simple(CtNode& node, int agent) {
    node.plan.paths[agent] =
        constrained_path(instance_, agent, node.constraints, goal_distances_.for_agent(agent));
    return true;
  }

  // Replans the meta agent containing `agent` (the whole member set under
  // MA-DBS, just the agent itself otherwise).
  bool replan_agent(CtNode& node, int agent) {
    if (!meta_) return replan_simple(node, agent);
    const std::vector<int>& members = meta_->partition->members(agent);
    if (members.size() == 1) return replan_simple(node, agent);
    return replan_members(node, members);
  }

  // Joint replan of `members` through the meta solver (DBS). Returns false
  // when the sub-solve ran out of budget, which aborts the whole search.
  bool replan_members(CtNode& node, const std::vector<int>& members) {
    std::vector<Constraint> relevant;
    for (const Constraint& c : node.constraints) {
      if (std::binary_search(members.begin(), members.end(), c.agent)) relevant.push_back(c);
    }
    // The CT node budget does not bound the sub-solve; wall clock and the
    // kill switch do.
    SearchLimits inner = limits_;
    inner.node_budget.reset();
    const SolveResult sub = meta_->meta_solver(members, relevant, inner);
    if (sub.status != SolveStatus::solved) return false;
    for (const int member : members) node.plan.paths[member] = sub.plan.paths[member];
    return true;
  }

  void finish_node(CtNode& node) {
    node.cost = 0;
    for (const int agent : agents_) node.cost += node.plan.paths[agent] ? 0 : 1;
    node.collision_count = static_cast<int>(find_collisions(instance_, node.plan).size());
    node.seq = next_seq_++;
  }

  static bool plan_violates(const Plan& plan, const Constraint& c) {
    if (!plan.paths[c.agent]) return false;
    const Path& path = *plan.paths[c.agent];
    if (c.kind == ConstraintKind::vertex) return path[c.time] == c.u;
    return path[c.time] == c.u && path[c.time + 1] == c.v;
  }

  const Instance& instance_;
  std::vector<int> agents_;
  CbsMode mode_;
  SearchLimits limits_;
  MetaContext* meta_;
  GoalDistances goal_distances_;
  const std::vector<Constraint>& external_constraints_;
  std::priority_queue<CtNodePtr, std::vector<CtNodePtr>, CtNodeWorse> open_;
  std::int64_t next_seq_ = 0;
};

}  // namespace

SolveResult high_level_search(const Instance& instance, std::span<const int> agents,
                              const std::vector<Constraint>& external_constraints, CbsMode mode,
                              const SearchLimits& limits, MetaContext* meta) {
  return HighLevelSearch(instance, agents, external_constraints, mode, limits, meta).run();
}

}  // namespace detail

SolveResult solve_cbs_dl(const Instance& instance,
                         const std::vector<Constraint>& external_constraints, CbsMode mode,
                         const SearchLimits& limits) {
  std::vector<int> all(instance.agent_count());
  std::iota(all.begin(), all.end(), 0);
  return detail::high_level_search(instance, all, external_constraints, mode, limits, nullptr);
}

SolveResult solve_cbs_dl_subset(const Instance& instance, std::span<const int> agents,
                                const std::vector<Constraint>& external_constraints, CbsMode mode,
                                const SearchLimits& limits) {
  return detail::high_level_search(instance, agents, external_constraints, mode, limits, nullptr);
}

}  // namespace mapfdl
