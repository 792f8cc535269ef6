#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "ipp/executor.hpp"

using namespace ipp;

namespace {

double distinct_gain(const PlanGraph& g, const std::vector<VertexId>& visited) {
  std::set<VertexId> d(visited.begin(), visited.end());
  double s = 0.0;
  for (VertexId v : d) s += g.gain(v);
  return s;
}

}  // namespace

TEST_CASE("invalid configurations are rejected") {
  Rng rng(101);
  auto g = testing::random_symmetric_graph(rng, 6, 8);
  CHECK_THROWS_AS(run_episode(g, 0, 5.0, PlannerSpec::nbs(1), Criterion::PathRatio,
                              ReplanStrategy::NoReplan),
                  std::invalid_argument);
  PerceptionState ps(g, 3.0);
  CHECK_THROWS_AS(run_episode(g, 0, 5.0, PlannerSpec::nbs(1), Criterion::PathGain,
                              ReplanStrategy::NoReplan, &ps),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_episode(g, 0, 0.0, PlannerSpec::nbs(1), Criterion::PathGain,
                              ReplanStrategy::AtGoal),
                  std::invalid_argument);
}

TEST_CASE("no-replan executes exactly one plan") {
  Rng rng(103);
  auto g = testing::random_symmetric_graph(rng, 8, 12);
  auto r = run_episode(g, 0, 8.0, PlannerSpec::nbs(4, 10), Criterion::PathGain,
                       ReplanStrategy::NoReplan);
  CHECK(r.plans == 1);
  CHECK(r.trace.size() == 1);
  CHECK(r.visited.front() == 0);
  CHECK(r.cost_used <= 8.0 + 1e-9);
  CHECK(r.collected_gain == doctest::Approx(distinct_gain(g, r.visited)));
}

TEST_CASE("collected gain equals the distinct-vertex sum under every strategy") {
  Rng rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testing::random_symmetric_graph(rng, 9, 14);
    double C = rng.uniform(4.0, 12.0);
    for (auto strat : {ReplanStrategy::NoReplan, ReplanStrategy::AtGoal,
                       ReplanStrategy::EveryNode}) {
      auto r = run_episode(g, 0, C, PlannerSpec::nbs(2, 8), Criterion::PathGain, strat);
      CHECK(r.cost_used <= C + 1e-9);
      CHECK(r.collected_gain == doctest::Approx(distinct_gain(g, r.visited)));
      // Consecutive visits follow graph edges.
      for (std::size_t i = 0; i + 1 < r.visited.size(); ++i)
        CHECK(g.edge_cost(r.visited[i], r.visited[i + 1]) > 0.0);
    }
  }
}

TEST_CASE("replanning at the goal never collects less than no-replan") {
  // With gains zeroed after collection, at-goal continues from the end
  // of the first plan with the leftover budget, so it can only add gain.
  Rng rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testing::random_symmetric_graph(rng, 8, 12);
    double C = rng.uniform(5.0, 14.0);
    auto none = run_episode(g, 0, C, PlannerSpec::nbs(2, 8), Criterion::PathGain,
                            ReplanStrategy::NoReplan);
    auto goal = run_episode(g, 0, C, PlannerSpec::nbs(2, 8), Criterion::PathGain,
                            ReplanStrategy::AtGoal);
    CHECK(goal.collected_gain >= none.collected_gain - 1e-9);
    CHECK(goal.plans >= none.plans);
  }
}

TEST_CASE("every-node replanning reacts to zeroed gains") {
  // Line 0-1-2-3 with a juicy vertex 3; every-node should still walk
  // down the line, one plan per traversed edge.
  PlanGraph g;
  for (int i = 0; i < 4; ++i) g.add_vertex(Vec2{double(i), 0}, double(i * i));
  for (int i = 0; i < 3; ++i) g.add_edge_sym(i, i + 1, 1.0);
  auto r = run_episode(g, 0, 3.0, PlannerSpec::nbs(1, 5), Criterion::PathGain,
                       ReplanStrategy::EveryNode);
  CHECK(r.visited == std::vector<VertexId>{0, 1, 2, 3});
  CHECK(r.collected_gain == doctest::Approx(0 + 1 + 4 + 9));
  CHECK(r.plans == 3);  // budget is exhausted exactly at vertex 3
}

TEST_CASE("trace bookkeeping: budgets decrease and gains accumulate") {
  Rng rng(113);
  auto g = testing::random_symmetric_graph(rng, 9, 13);
  auto r = run_episode(g, 0, 10.0, PlannerSpec::nbs(2, 8), Criterion::ExpectedGain,
                       ReplanStrategy::EveryNode);
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.front().remaining_budget == doctest::Approx(10.0));
  for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) {
    CHECK(r.trace[i + 1].remaining_budget < r.trace[i].remaining_budget);
    CHECK(r.trace[i + 1].realized_gain >= r.trace[i].realized_gain);
  }
  for (const auto& step : r.trace)
    CHECK(step.planned_path.front() == r.visited[&step - r.trace.data()]);
}

TEST_CASE("online episodes only plan over discovered vertices") {
  GridGraphSpec spec;
  spec.extent = 10.0;
  spec.seed = 21;
  auto g = generate_grid(spec);
  PerceptionState ps(g, 3.0);
  auto r = run_episode(g, 0, 12.0, PlannerSpec::nbs(1, 30), Criterion::ExpectedGain,
                       ReplanStrategy::EveryNode, &ps);
  CHECK(r.cost_used <= 12.0 + 1e-9);
  CHECK(r.collected_gain == doctest::Approx(distinct_gain(g, r.visited)));
  // Every planned vertex was discovered at planning time; in particular
  // all visited vertices end up discovered.
  for (VertexId v : r.visited) CHECK(ps.discovered(v));
  CHECK(r.visited.size() > 1);  // it actually went somewhere
}

TEST_CASE("planner specs execute and label themselves") {
  Rng rng(127);
  auto g = testing::random_symmetric_graph(rng, 7, 10);
  for (auto spec : {PlannerSpec::nbs(2), PlannerSpec::dbs(2), PlannerSpec::spt(0.5),
                    PlannerSpec::tsp(0.5)}) {
    auto r = run_episode(g, 0, 6.0, spec, Criterion::PathGain, ReplanStrategy::AtGoal);
    CHECK(r.cost_used <= 6.0 + 1e-9);
    CHECK(!spec.label().empty());
  }
  CHECK(strategy_from_name(strategy_name(ReplanStrategy::AtGoal)) ==
        ReplanStrategy::AtGoal);
  CHECK_THROWS_AS(strategy_from_name("bogus"), std::invalid_argument);
}
