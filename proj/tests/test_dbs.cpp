#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mapfdl/collision.hpp"
#include "mapfdl/dbs.hpp"
#include "mapfdl/oracle.hpp"

using namespace mapfdl;

TEST_CASE("consistency checks on the fixtures") {
  const Instance i1 = test::i1();
  CHECK(check_consistent(i1, AgentGroup{{0}}).verdict ==
        ConsistencyResult::Verdict::consistent);
  CHECK(check_consistent(i1, AgentGroup{{0, 1}}).verdict ==
        ConsistencyResult::Verdict::inconsistent);
  CHECK(check_consistent(test::i2(), AgentGroup{{0, 1}}).verdict ==
        ConsistencyResult::Verdict::consistent);
  // The empty group is consistent.
  CHECK(check_consistent(i1, AgentGroup{}).verdict == ConsistencyResult::Verdict::consistent);
}

TEST_CASE("consistent check returns a zero-cost sub-plan") {
  const Instance instance = test::i1();
  const ConsistencyResult result = check_consistent(instance, AgentGroup{{0}});
  REQUIRE(result.verdict == ConsistencyResult::Verdict::consistent);
  REQUIRE(result.sub_plan.paths[0].has_value());
  CHECK(*result.sub_plan.paths[0] == Path{0, 1, 2});
  CHECK_FALSE(result.sub_plan.paths[1].has_value());
}

TEST_CASE("I1 follows the forced death-tree trace") {
  const Instance instance = test::i1();
  const SolveResult result = solve_dbs(instance);
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.cost == 1);
  CHECK(validate_plan(instance, result.plan).ok());
  // Root (both singletons consistent) -> merge -> {a0,a1} inconsistent ->
  // split -> first child at cost 1 is the goal.
  CHECK(result.expansion_costs == std::vector<int>{0, 0, 1});
  CHECK(result.plan.successful() == 1);
}

TEST_CASE("I2 solves at cost 0") {
  const Instance instance = test::i2();
  const SolveResult result = solve_dbs(instance);
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.cost == 0);
  CHECK(result.plan.successful() == 2);
  CHECK(validate_plan(instance, result.plan).ok());
}

TEST_CASE("single-agent instance returns at the first expansion") {
  const Instance instance = test::grid_instance({"...", "..."}, {{0, 0, 1, 2}}, 4, "solo");
  const SolveResult result = solve_dbs(instance);
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.cost == 0);
  CHECK(result.nodes_expanded == 1);
}

TEST_CASE("external constraints flow into the consistency checks") {
  const Instance instance = test::i1();
  Constraint block;
  block.kind = ConstraintKind::vertex;
  block.agent = 0;
  block.u = block.v = 1;
  block.time = 1;
  block.spawned_from = {0, 1};
  // Agent 0 cannot path at all; DBS must kill it.
  const SolveResult result = solve_dbs(instance, {block});
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.cost == 1);
  CHECK_FALSE(result.plan.paths[0].has_value());
}

TEST_CASE("dbs matches cbs-dl and the oracle on random tiny instances") {
  std::mt19937 rng(606);
  for (int round = 0; round < 120; ++round) {
    const int agents = 2 + static_cast<int>(rng() % 3);
    const Instance instance = test::random_tiny_graph_instance(rng, 7, 4, agents);
    const SolveResult dbs = solve_dbs(instance);
    REQUIRE(dbs.status == SolveStatus::solved);
    CHECK(validate_plan(instance, dbs.plan).ok());
    CHECK(plan_cost(dbs.plan) == dbs.cost);
    CHECK(dbs.cost == oracle::brute_force_optimal(instance));
    CHECK(dbs.cost == solve_cbs_dl(instance).cost);
    CHECK(std::is_sorted(dbs.expansion_costs.begin(), dbs.expansion_costs.end()));
  }
}

TEST_CASE("consistency is monotone under subsets (via the solver route)") {
  std::mt19937 rng(7007);
  for (int round = 0; round < 60; ++round) {
    const Instance instance = test::random_tiny_graph_instance(rng, 6, 3, 3);
    const std::vector<std::vector<int>> subsets{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (const auto& members : subsets) {
      if (check_consistent(instance, AgentGroup{members}).verdict !=
          ConsistencyResult::Verdict::consistent)
        continue;
      for (const auto& sub : subsets) {
        if (!std::includes(members.begin(), members.end(), sub.begin(), sub.end())) continue;
        CHECK(check_consistent(instance, AgentGroup{sub}).verdict ==
              ConsistencyResult::Verdict::consistent);
      }
    }
  }
}

TEST_CASE("deadline abort propagates out of the death tree") {
  SearchLimits limits;
  limits.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK(solve_dbs(test::i1(), {}, limits).status == SolveStatus::budget_exhausted);
}
