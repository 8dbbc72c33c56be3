#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mapfdl/cbs_dl.hpp"
#include "mapfdl/collision.hpp"
#include "mapfdl/oracle.hpp"

using namespace mapfdl;

namespace {

void check_solved_against_oracle(const Instance& instance, const SolveResult& result) {
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(validate_plan(instance, result.plan).ok());
  CHECK(plan_cost(result.plan) == result.cost);
  CHECK(result.cost == oracle::brute_force_optimal(instance));
  CHECK(std::is_sorted(result.expansion_costs.begin(), result.expansion_costs.end()));
}

}  // namespace

TEST_CASE("I1 solves at cost 1") {
  const Instance instance = test::i1();
  check_solved_against_oracle(instance, solve_cbs_dl(instance));
}

TEST_CASE("I2 solves at cost 0 with a rotation") {
  const Instance instance = test::i2();
  const SolveResult result = solve_cbs_dl(instance);
  check_solved_against_oracle(instance, result);
  CHECK(result.cost == 0);
  CHECK(result.plan.successful() == 2);
}

TEST_CASE("single-agent instances solve at the root") {
  const Instance instance = test::grid_instance({"....", "...."}, {{0, 0, 1, 3}}, 6, "solo");
  const SolveResult result = solve_cbs_dl(instance);
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.cost == 0);
  CHECK(result.nodes_expanded == 1);
  CHECK(result.expansion_costs == std::vector<int>{0});
}

TEST_CASE("zero-cost check: I1 is inconsistent, I2 is consistent") {
  CHECK(solve_cbs_dl(test::i1(), {}, CbsMode::zero_cost_check).status ==
        SolveStatus::inconsistent);
  const SolveResult i2 = solve_cbs_dl(test::i2(), {}, CbsMode::zero_cost_check);
  CHECK(i2.status == SolveStatus::solved);
  CHECK(i2.cost == 0);
}

TEST_CASE("node budget reports exhaustion") {
  SearchLimits limits;
  limits.node_budget = 1;  // I1 needs more than one expansion
  const SolveResult result = solve_cbs_dl(test::i1(), {}, CbsMode::full, limits);
  CHECK(result.status == SolveStatus::budget_exhausted);
}

TEST_CASE("cancel flag aborts the search") {
  std::atomic<bool> cancel{true};
  SearchLimits limits;
  limits.cancel = &cancel;
  CHECK(solve_cbs_dl(test::i1(), {}, CbsMode::full, limits).status ==
        SolveStatus::budget_exhausted);
}

TEST_CASE("external constraints restrict the root") {
  const Instance instance = test::i1();
  // Forbid agent 0's only midpoint: it must fail, agent 1 still crosses.
  Constraint block;
  block.kind = ConstraintKind::vertex;
  block.agent = 0;
  block.u = block.v = 1;
  block.time = 1;
  block.spawned_from = {0, 1};
  const SolveResult result = solve_cbs_dl(instance, {block});
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.cost == 1);
  CHECK_FALSE(result.plan.paths[0].has_value());
  CHECK(result.plan.paths[1].has_value());
}

TEST_CASE("subset solving plans only the chosen agents") {
  const Instance instance = test::i1();
  const std::vector<int> only_first{0};
  const SolveResult result = solve_cbs_dl_subset(instance, only_first, {});
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.cost == 0);
  CHECK(result.plan.paths[0].has_value());
  CHECK_FALSE(result.plan.paths[1].has_value());
}

TEST_CASE("random tiny instances match the brute-force optimum") {
  std::mt19937 rng(808);
  for (int round = 0; round < 150; ++round) {
    const int agents = 2 + static_cast<int>(rng() % 3);
    const Instance instance = test::random_tiny_graph_instance(rng, 7, 4, agents);
    check_solved_against_oracle(instance, solve_cbs_dl(instance));
  }
}

TEST_CASE("zero-cost check verdict matches the oracle") {
  std::mt19937 rng(911);
  int consistent = 0, inconsistent = 0;
  for (int round = 0; round < 120; ++round) {
    const Instance instance = test::random_tiny_graph_instance(rng, 6, 3, 2);
    const SolveResult result = solve_cbs_dl(instance, {}, CbsMode::zero_cost_check);
    const bool zero_cost = oracle::brute_force_optimal(instance) == 0;
    if (zero_cost) {
      REQUIRE(result.status == SolveStatus::solved);
      CHECK(result.cost == 0);
      ++consistent;
    } else {
      CHECK(result.status == SolveStatus::inconsistent);
      ++inconsistent;
    }
  }
  CHECK(consistent > 10);
  CHECK(inconsistent > 10);
}

TEST_CASE("solve twice yields identical plans and traces") {
  std::mt19937 rng(5150);
  for (int round = 0; round < 20; ++round) {
    const Instance instance = test::random_tiny_graph_instance(rng, 7, 4, 3);
    const SolveResult a = solve_cbs_dl(instance);
    const SolveResult b = solve_cbs_dl(instance);
    CHECK(a.cost == b.cost);
    CHECK(a.expansion_costs == b.expansion_costs);
    CHECK(a.plan.paths == b.plan.paths);
  }
}
