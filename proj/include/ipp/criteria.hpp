#pragma once

// Path selection criteria: path gain, gain-to-cost ratio, and the
// frontier-aware expected gain.

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipp/core.hpp"

namespace ipp {

enum class Criterion { PathGain, PathRatio, ExpectedGain };

inline const char* criterion_name(Criterion c) {
  switch (c) {
    case Criterion::PathGain: return "gain";
    case Criterion::PathRatio: return "ratio";
    case Criterion::ExpectedGain: return "expected_gain";
  }
  return "?";
}

inline Criterion criterion_from_name(const std::string& name) {
  if (name == "gain") return Criterion::PathGain;
  if (name == "ratio") return Criterion::PathRatio;
  if (name == "expected_gain") return Criterion::ExpectedGain;
  throw std::invalid_argument("unknown criterion: " + name);
}

// Budget plus criterion choice. Frontier membership is read from the
// graph's per-vertex frontier flags.
struct CriterionContext {
  Criterion criterion = Criterion::PathGain;
  double budget = 0.0;

  CriterionContext(Criterion c, double budget_) : criterion(c), budget(budget_) {
    if (!(budget > 0.0)) throw std::invalid_argument("budget must be > 0");
  }
};

// A path is a frontier path iff its terminal vertex is a frontier vertex.
inline bool is_frontier_path(const Path& p) {
  return p.graph().is_frontier(p.back());
}

inline double quality(const Path& p, const CriterionContext& ctx) {
  switch (ctx.criterion) {
    case Criterion::PathGain:
      return p.gain();
    case Criterion::PathRatio:
      return p.ratio();
    case Criterion::ExpectedGain:
      return is_frontier_path(p) ? p.ratio() * ctx.budget : p.gain();
  }
  return 0.0;
}

// Checks that argmax_p r(p)*C and argmax_p g(p) + r*(C - c(p)) select the
// same paths. Test instrument, not production code.
inline bool argmax_equivalence_check(const std::vector<Path>& candidates,
                                     double budget, double tol = 1e-9) {
  if (candidates.empty()) throw std::invalid_argument("empty candidate set");
  for (const auto& p : candidates)
    if (!(p.cost() > 0.0)) throw std::invalid_argument("candidates must have cost > 0");

  double r_star = 0.0;
  for (const auto& p : candidates) r_star = std::max(r_star, p.ratio());

  std::set<std::size_t> max1, max2;
  double best1 = -std::numeric_limits<double>::infinity();
  double best2 = best1;
  std::vector<double> q1(candidates.size()), q2(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& p = candidates[i];
    q1[i] = p.ratio() * budget;
    q2[i] = p.gain() + r_star * (budget - p.cost());
    best1 = std::max(best1, q1[i]);
    best2 = std::max(best2, q2[i]);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (q1[i] >= best1 - tol * std::max(1.0, std::abs(best1))) max1.insert(i);
    if (q2[i] >= best2 - tol * std::max(1.0, std::abs(best2))) max2.insert(i);
  }
  return max1 == max2;
}

}  // namespace ipp
