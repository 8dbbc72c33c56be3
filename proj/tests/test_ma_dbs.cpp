#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mapfdl/collision.hpp"
#include "mapfdl/dbs.hpp"
#include "mapfdl/ma_dbs.hpp"
#include "mapfdl/oracle.hpp"

using namespace mapfdl;

namespace {

Constraint vertex_constraint(int agent, int v, int t, std::pair<int, int> from) {
  Constraint c;
  c.kind = ConstraintKind::vertex;
  c.agent = agent;
  c.u = c.v = v;
  c.time = t;
  c.spawned_from = from;
  return c;
}

}  // namespace

TEST_CASE("should_merge uses strict inequality over the pair sums") {
  ConflictMatrix cm(4);
  const MetaAgent a{0, {0}};
  const MetaAgent b{1, {1}};

  cm.bump(0, 1);
  CHECK(should_merge(cm, a, b, 0));        // 1 > 0
  CHECK_FALSE(should_merge(cm, a, b, 10));  // 1 <= 10

  for (int k = 0; k < 9; ++k) cm.bump(0, 1);
  CHECK_FALSE(should_merge(cm, a, b, 10));  // exactly 10 is not enough
  cm.bump(0, 1);
  CHECK(should_merge(cm, a, b, 10));  // 11 > 10

  ConflictMatrix cm2(4);
  cm2.bump(2, 3);
  cm2.bump(2, 3);
  cm2.bump(2, 3);
  CHECK_FALSE(should_merge(cm2, MetaAgent{2, {2}}, MetaAgent{3, {3}}, 100));

  // Sums aggregate over all cross pairs of the two meta agents.
  ConflictMatrix cm3(4);
  cm3.bump(0, 2);
  cm3.bump(1, 3);
  CHECK(should_merge(cm3, MetaAgent{0, {0, 1}}, MetaAgent{2, {2, 3}}, 1));
}

TEST_CASE("merge_constraints drops internals and keeps externals") {
  const MetaAgent merged{0, {0, 1}};
  const Constraint internal = vertex_constraint(0, 5, 1, {0, 1});
  const Constraint external = vertex_constraint(0, 5, 1, {0, 2});

  CHECK(merge_constraints({internal}, merged).empty());

  const auto kept = merge_constraints({external}, merged);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].spawned_from == std::pair<int, int>{0, 2});

  const auto mixed = merge_constraints({internal, external}, merged);
  REQUIRE(mixed.size() == 1);
  CHECK(mixed[0].spawned_from == std::pair<int, int>{0, 2});
}

TEST_CASE("B=0 on I1 merges at the first collision and costs 1") {
  const Instance instance = test::i1();
  const SolveResult result = solve_ma_dbs(instance, 0);
  REQUIRE(result.status == SolveStatus::solved);
  CHECK(result.cost == 1);
  CHECK(validate_plan(instance, result.plan).ok());
}

TEST_CASE("B=100 on I2 never merges and behaves like CBS-DL") {
  const Instance instance = test::i2();
  const SolveResult ma = solve_ma_dbs(instance, 100);
  REQUIRE(ma.status == SolveStatus::solved);
  CHECK(ma.cost == 0);
  const SolveResult cbs = solve_cbs_dl(instance);
  CHECK(ma.expansion_costs == cbs.expansion_costs);
  CHECK(ma.plan.paths == cbs.plan.paths);
}

TEST_CASE("single-agent instance solves at the root for any B") {
  const Instance instance = test::grid_instance({"...", "..."}, {{0, 0, 1, 2}}, 4, "solo");
  for (const int b : {0, 1, 1000000000}) {
    const SolveResult result = solve_ma_dbs(instance, b);
    REQUIRE(result.status == SolveStatus::solved);
    CHECK(result.cost == 0);
    CHECK(result.nodes_expanded == 1);
  }
}

TEST_CASE("all merge thresholds agree with the oracle on random tiny instances") {
  std::mt19937 rng(414);
  for (int round = 0; round < 60; ++round) {
    const int agents = 2 + static_cast<int>(rng() % 3);
    const Instance instance = test::random_tiny_graph_instance(rng, 7, 4, agents);
    const int expected = oracle::brute_force_optimal(instance);
    for (const int b : {0, 1, 10}) {
      const SolveResult result = solve_ma_dbs(instance, b);
      REQUIRE(result.status == SolveStatus::solved);
      CHECK(result.cost == expected);
      CHECK(validate_plan(instance, result.plan).ok());
      CHECK(plan_cost(result.plan) == result.cost);
      CHECK(std::is_sorted(result.expansion_costs.begin(), result.expansion_costs.end()));
    }
  }
}

TEST_CASE("with an unreachable threshold the expansion trace equals CBS-DL") {
  std::mt19937 rng(272);
  for (int round = 0; round < 50; ++round) {
    const int agents = 2 + static_cast<int>(rng() % 3);
    const Instance instance = test::random_tiny_graph_instance(rng, 7, 4, agents);
    const SolveResult cbs = solve_cbs_dl(instance);
    const SolveResult ma = solve_ma_dbs(instance, 1000000000);
    REQUIRE(ma.status == SolveStatus::solved);
    CHECK(ma.cost == cbs.cost);
    CHECK(ma.expansion_costs == cbs.expansion_costs);
    CHECK(ma.nodes_expanded == cbs.nodes_expanded);
  }
}

TEST_CASE("budget exhaustion surfaces from ma-dbs") {
  SearchLimits limits;
  limits.node_budget = 1;
  const SolveResult result = solve_ma_dbs(test::i1(), 1000000000, limits);
  CHECK(result.status == SolveStatus::budget_exhausted);
}
