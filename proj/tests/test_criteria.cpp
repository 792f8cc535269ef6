#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "ipp/criteria.hpp"

using namespace ipp;

TEST_CASE("quality under the three criteria") {
  PlanGraph g;
  g.add_vertex(Vec2{0, 0}, 0.0);
  g.add_vertex(Vec2{1, 0}, 10.0);          // non-frontier
  auto f = g.add_vertex(Vec2{2, 0}, 10.0); // frontier
  g.set_frontier(f, true);
  g.add_edge(0, 1, 5.0);
  g.add_edge(0, 2, 5.0);

  auto plain = Path(g, 0).extend(1);
  auto frontier = Path(g, 0).extend(2);
  CriterionContext gain_ctx(Criterion::PathGain, 50.0);
  CriterionContext ratio_ctx(Criterion::PathRatio, 50.0);
  CriterionContext exp_ctx(Criterion::ExpectedGain, 50.0);

  CHECK(quality(plain, gain_ctx) == doctest::Approx(10.0));
  CHECK(quality(plain, ratio_ctx) == doctest::Approx(2.0));
  // Non-frontier path falls back to plain gain.
  CHECK(quality(plain, exp_ctx) == doctest::Approx(10.0));
  // Frontier path extrapolates r * C = 2 * 50.
  CHECK(quality(frontier, exp_ctx) == doctest::Approx(100.0));
}

TEST_CASE("zero-gain frontier path scores zero under all criteria") {
  PlanGraph g;
  g.add_vertex(Vec2{0, 0}, 0.0);
  auto f = g.add_vertex(Vec2{1, 0}, 0.0);
  g.set_frontier(f, true);
  g.add_edge(0, 1, 2.0);
  auto p = Path(g, 0).extend(1);
  for (auto c : {Criterion::PathGain, Criterion::PathRatio, Criterion::ExpectedGain})
    CHECK(quality(p, CriterionContext(c, 10.0)) == doctest::Approx(0.0));
}

TEST_CASE("argmax equivalence: singleton and random sets") {
  Rng rng(23);
  auto g = testing::random_symmetric_graph(rng, 10, 15);

  auto candidates = [&](int n) {
    std::vector<Path> out;
    while (static_cast<int>(out.size()) < n) {
      auto w = testing::random_walk(rng, g, static_cast<VertexId>(rng.uniform_index(10)), 8);
      if (w.cost() > 0.0) out.push_back(w);
    }
    return out;
  };

  CHECK(argmax_equivalence_check(candidates(1), 20.0));
  for (int trial = 0; trial < 100; ++trial)
    CHECK(argmax_equivalence_check(candidates(20), rng.uniform(5.0, 100.0)));
  CHECK_THROWS_AS(argmax_equivalence_check({}, 10.0), std::invalid_argument);
}

TEST_CASE("tied ratios: both maximizer sets contain exactly the tied paths") {
  // Two paths with ratio 2 and distinct gains, one clearly worse.
  PlanGraph g;
  g.add_vertex(Vec2{0, 0}, 0.0);
  g.add_vertex(Vec2{1, 0}, 8.0);
  g.add_vertex(Vec2{2, 0}, 12.0);
  g.add_vertex(Vec2{3, 0}, 3.0);
  g.add_edge(0, 1, 4.0);
  g.add_edge(0, 2, 6.0);
  g.add_edge(0, 3, 6.0);
  std::vector<Path> cands{Path(g, 0).extend(1), Path(g, 0).extend(2),
                          Path(g, 0).extend(3)};
  double C = 30.0;
  CHECK(argmax_equivalence_check(cands, C));

  // Confirm both objectives pick exactly the two ratio-2 paths.
  double r_star = 2.0;
  std::set<int> m1, m2;
  for (int i = 0; i < 3; ++i) {
    if (cands[i].ratio() * C >= r_star * C - 1e-9) m1.insert(i);
    double q2 = cands[i].gain() + r_star * (C - cands[i].cost());
    if (q2 >= r_star * C - 1e-9) m2.insert(i);
  }
  CHECK(m1 == std::set<int>{0, 1});
  CHECK(m1 == m2);
}

TEST_CASE("corollary: max expected gain splits over frontier and non-frontier paths") {
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = testing::random_symmetric_graph(rng, 6, 8);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (rng.uniform() < 0.3) g.set_frontier(v, true);

    double C = rng.uniform(4.0, 12.0);
    CriterionContext ctx(Criterion::ExpectedGain, C);

    // Enumerate candidate paths (bounded walks), split by frontier status.
    std::vector<Path> all;
    for (int i = 0; i < 300; ++i) {
      auto w = testing::random_walk(rng, g, 0, 5);
      if (w.cost() > 0.0 && w.cost() <= C) all.push_back(w);
    }
    if (all.empty()) continue;
    double best_e = -1e300, best_frontier = -1e300, best_plain = -1e300;
    for (const auto& p : all) {
      best_e = std::max(best_e, quality(p, ctx));
      if (is_frontier_path(p))
        best_frontier = std::max(best_frontier, p.ratio() * C);
      else
        best_plain = std::max(best_plain, p.gain());
    }
    CHECK(best_e == doctest::Approx(std::max(best_frontier, best_plain)));
  }
}

TEST_CASE("gain scaling leaves the quality argmax invariant") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::random_symmetric_graph(rng, 7, 10);
    double lambda = rng.uniform(0.1, 5.0);
    PlanGraph scaled = g;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      scaled.set_gain(v, lambda * g.gain(v));

    std::vector<std::vector<VertexId>> seqs;
    for (int i = 0; i < 50; ++i) {
      auto w = testing::random_walk(rng, g, 0, 6);
      if (w.cost() > 0.0) seqs.push_back(w.vertices());
    }
    if (seqs.empty()) continue;
    for (auto crit : {Criterion::PathGain, Criterion::PathRatio, Criterion::ExpectedGain}) {
      CriterionContext ctx(crit, 25.0);
      std::set<std::size_t> arg1, arg2;
      double b1 = -1e300, b2 = -1e300;
      std::vector<double> q1, q2;
      for (const auto& s : seqs) {
        q1.push_back(quality(Path::from_sequence(g, s), ctx));
        q2.push_back(quality(Path::from_sequence(scaled, s), ctx));
        b1 = std::max(b1, q1.back());
        b2 = std::max(b2, q2.back());
      }
      for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (q1[i] >= b1 - 1e-9 * std::max(1.0, std::abs(b1))) arg1.insert(i);
        if (q2[i] >= b2 - 1e-9 * std::max(1.0, std::abs(b2))) arg2.insert(i);
      }
      CHECK(arg1 == arg2);
    }
  }
}
