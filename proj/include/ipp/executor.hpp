#pragma once

// Episode engine: replanning strategies and budget/gain bookkeeping for
// the a-priori and online-perception settings.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "ipp/core.hpp"
#include "ipp/criteria.hpp"
#include "ipp/envs.hpp"
#include "ipp/planners.hpp"

namespace ipp {

enum class ReplanStrategy { NoReplan, AtGoal, EveryNode };

inline const char* strategy_name(ReplanStrategy s) {
  switch (s) {
    case ReplanStrategy::NoReplan: return "no_replan";
    case ReplanStrategy::AtGoal: return "at_goal";
    case ReplanStrategy::EveryNode: return "every_node";
  }
  return "?";
}

inline ReplanStrategy strategy_from_name(const std::string& name) {
  if (name == "no_replan") return ReplanStrategy::NoReplan;
  if (name == "at_goal") return ReplanStrategy::AtGoal;
  if (name == "every_node") return ReplanStrategy::EveryNode;
  throw std::invalid_argument("unknown strategy: " + name);
}

// Planner spec shared by the harness and the CLI.
struct PlannerSpec {
  enum class Kind { Nbs, Dbs, Spt, Tsp, Oracle } kind = Kind::Nbs;
  std::size_t beam_width = 1;
  std::size_t search_depth = 100;
  double alpha = 1.0;

  static PlannerSpec nbs(std::size_t b, std::size_t d = 100) {
    return PlannerSpec{Kind::Nbs, b, d, 0.0};
  }
  static PlannerSpec dbs(std::size_t b, std::size_t d = 100) {
    return PlannerSpec{Kind::Dbs, b, d, 0.0};
  }
  static PlannerSpec spt(double alpha) {
    return PlannerSpec{Kind::Spt, 1, 1, alpha};
  }
  static PlannerSpec tsp(double alpha) {
    return PlannerSpec{Kind::Tsp, 1, 1, alpha};
  }
  static PlannerSpec oracle() { return PlannerSpec{Kind::Oracle, 1, 1, 0.0}; }

  PlanResult plan(const PlanGraph& graph, VertexId start, double budget,
                  const CriterionContext& ctx) const {
    switch (kind) {
      case Kind::Nbs:
        return ipp::nbs(graph, start, budget, BeamParams(beam_width, search_depth), ctx);
      case Kind::Dbs:
        return ipp::dbs(graph, start, budget, BeamParams(beam_width, search_depth), ctx);
      case Kind::Spt:
        return spt_plan(graph, start, budget, alpha, ctx);
      case Kind::Tsp:
        return tsp_plan(graph, start, budget, TspParams(alpha));
      case Kind::Oracle:
        return oracle_trails(graph, start, budget, ctx);
    }
    throw std::logic_error("unreachable");
  }

  std::string label() const {
    switch (kind) {
      case Kind::Nbs: return "nbs_B" + std::to_string(beam_width);
      case Kind::Dbs: return "dbs_B" + std::to_string(beam_width);
      case Kind::Spt: return "spt_a" + std::to_string(alpha).substr(0, 4);
      case Kind::Tsp: return "tsp_a" + std::to_string(alpha).substr(0, 4);
      case Kind::Oracle: return "oracle";
    }
    return "?";
  }
};

struct TraceStep {
  double remaining_budget = 0.0;
  std::vector<VertexId> planned_path;
  double realized_gain = 0.0;
};

struct EpisodeResult {
  double collected_gain = 0.0;
  double cost_used = 0.0;
  std::vector<VertexId> visited;
  std::vector<TraceStep> trace;
  double plan_time_total = 0.0;  // seconds, planning only
  std::uint64_t plans = 0;
};

namespace detail {

struct EpisodeState {
  const PlanGraph& truth;
  PerceptionState* perception;  // null in the a-priori setting
  PlanGraph working;            // gains zeroed as vertices are visited
  std::unordered_set<VertexId> zeroed;
  EpisodeResult result;
  double budget;

  EpisodeState(const PlanGraph& truth_, PerceptionState* perception_, double budget_)
      : truth(truth_), perception(perception_),
        working(perception_ ? PlanGraph{} : truth_), budget(budget_) {}

  double remaining() const { return budget - result.cost_used; }

  // Arrival bookkeeping: observe, realize gain once, zero it.
  void arrive(VertexId v) {
    if (perception) perception->observe(v);
    result.visited.push_back(v);
    if (zeroed.insert(v).second) result.collected_gain += truth.gain(v);
  }

  void traverse(VertexId from, VertexId to) {
    double c = truth.edge_cost(from, to);
    if (c < 0.0) throw std::logic_error("episode: planned edge missing in graph");
    result.cost_used += c;
    if (result.cost_used > budget + 1e-9)
      throw std::logic_error("episode: planner exceeded budget");
    arrive(to);
  }

  // Planner view: discovered subgraph (online) or the true graph, with
  // visited gains zeroed.
  const PlanGraph& planning_graph() {
    if (perception) working = perception->discovered_graph();
    for (VertexId v : zeroed) working.set_gain(v, 0.0);
    return working;
  }

  void record(double rem, const Path& planned) {
    result.trace.push_back(TraceStep{rem, planned.vertices(), result.collected_gain});
  }
};

}  // namespace detail

// Runs one episode. `perception` non-null selects the online setting:
// every arrival reveals the rho-neighborhood before replanning.
inline EpisodeResult run_episode(const PlanGraph& graph, VertexId start,
                                 double budget, const PlannerSpec& planner,
                                 Criterion criterion, ReplanStrategy strategy,
                                 PerceptionState* perception = nullptr) {
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be > 0");
  if (criterion == Criterion::PathRatio && strategy == ReplanStrategy::NoReplan)
    throw std::invalid_argument("path ratio is inapplicable without replanning");
  if (perception && strategy == ReplanStrategy::NoReplan)
    throw std::invalid_argument("no-replan is invalid in online perception");

  detail::EpisodeState st(graph, perception, budget);
  st.arrive(start);
  VertexId current = start;

  auto plan_once = [&](double rem) {
    CriterionContext ctx(criterion, rem);
    PlanResult r = planner.plan(st.planning_graph(), current, rem, ctx);
    st.result.plan_time_total += r.wall_time.count();
    ++st.result.plans;
    return r;
  };

  for (;;) {
    double rem = st.remaining();
    if (!(rem > 0.0)) break;
    PlanResult plan = plan_once(rem);
    const Path& p = plan.best_path;
    if (p.cost() > rem + 1e-9)
      throw std::logic_error("episode: planner returned over-budget path");
    st.record(rem, p);
    if (p.length() == 0) break;  // bare path: nothing worth doing

    switch (strategy) {
      case ReplanStrategy::NoReplan:
      case ReplanStrategy::AtGoal:
        for (std::size_t i = 0; i + 1 < p.vertices().size(); ++i)
          st.traverse(p.vertices()[i], p.vertices()[i + 1]);
        current = p.back();
        break;
      case ReplanStrategy::EveryNode:
        st.traverse(p.vertices()[0], p.vertices()[1]);
        current = p.vertices()[1];
        break;
    }
    if (strategy == ReplanStrategy::NoReplan) break;
  }
  return st.result;
}

}  // namespace ipp
