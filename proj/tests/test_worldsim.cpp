#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ipp/worldsim.hpp"

using namespace ipp;

namespace {

constexpr double kPi = 3.14159265358979323846;

// 10 m x 10 m room, all Free, solid 0.2 m border.
World2D empty_room() {
  Grid2D g(100, 100, 0.1, Cell::Free);
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix)
      if (ix < 2 || iy < 2 || ix >= g.nx() - 2 || iy >= g.ny() - 2)
        g.set(ix, iy, Cell::Occupied);
  return World2D(std::move(g));
}

void add_wall(World2D& w, double x0, double y0, double x1, double y1) {
  for (int iy = 0; iy < w.truth.ny(); ++iy)
    for (int ix = 0; ix < w.truth.nx(); ++ix) {
      Vec2 p = w.truth.center(ix, iy);
      if (p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1)
        w.truth.set(ix, iy, Cell::Occupied);
    }
}

// Deterministic free start: the truth-grid cell center with the largest
// clearance.
Pose free_start(const World2D& w) {
  ClearanceField xi(w.truth, 0.0, false);
  Vec2 best{0.0, 0.0};
  double best_c = -1.0;
  for (int iy = 0; iy < w.truth.ny(); ++iy)
    for (int ix = 0; ix < w.truth.nx(); ++ix) {
      Vec2 p = w.truth.center(ix, iy);
      double c = xi.clearance(p);
      if (c > best_c) {
        best_c = c;
        best = p;
      }
    }
  return Pose{best, 0.0};
}

double total_point_gain(const World2D& w) {
  double g = 0.0;
  for (const auto& p : w.points) g += p.gain;
  return g;
}

}  // namespace

TEST_CASE("sensing stops at walls and leaves occluded space unknown") {
  World2D w = empty_room();
  add_wall(w, 6.0, 2.0, 6.2, 8.0);  // wall 1 m in front of the pose below
  Pose pose{{5.0, 5.0}, 0.0};
  sense(w, pose);

  // Cells just before the wall revealed, cells beyond it not.
  CHECK(w.known.at(Vec2{5.8, 5.0}) == Cell::Free);
  CHECK(w.known.at(Vec2{6.05, 5.0}) == Cell::Occupied);
  CHECK(w.known.at(Vec2{6.5, 5.0}) == Cell::Unknown);
  CHECK(w.known.at(Vec2{7.5, 5.5}) == Cell::Unknown);

  SUBCASE("repeated sensing is idempotent") {
    auto cells = w.known.cells();
    SenseResult again = sense(w, pose);
    CHECK(again.revealed == 0);
    CHECK(w.known.cells() == cells);
  }

  SUBCASE("estimate never contradicts ground truth") {
    for (int iy = 0; iy < w.known.ny(); ++iy)
      for (int ix = 0; ix < w.known.nx(); ++ix)
        if (w.known.at(ix, iy) != Cell::Unknown)
          REQUIRE(w.known.at(ix, iy) == w.truth.at(ix, iy));
  }
}

TEST_CASE("one scan reveals at most a 90-degree sector of cells") {
  World2D w = empty_room();
  SensorModel sensor;
  Pose pose{{5.0, 5.0}, 0.7};
  SenseResult sr = sense(w, pose);
  CHECK(sr.revealed > 0);

  // Oracle: enumerate cells whose center lies in the slightly inflated
  // sector (half a diagonal of margin for ray discretisation).
  double margin = w.truth.resolution();
  std::size_t sector = 0;
  for (int iy = 0; iy < w.truth.ny(); ++iy)
    for (int ix = 0; ix < w.truth.nx(); ++ix) {
      Vec2 p = w.truth.center(ix, iy);
      double d = distance(p, pose.position);
      if (d > sensor.range + margin) continue;
      double ang = std::atan2(p.y - pose.position.y, p.x - pose.position.x);
      if (d > margin &&
          std::abs(MotionModel::angular_diff(ang, pose.yaw)) >
              sensor.fov / 2.0 + 0.15)
        continue;
      ++sector;
    }
  CHECK(sr.revealed <= sector);

  // Every revealed cell is inside the inflated sector.
  for (int iy = 0; iy < w.known.ny(); ++iy)
    for (int ix = 0; ix < w.known.nx(); ++ix) {
      if (w.known.at(ix, iy) == Cell::Unknown) continue;
      Vec2 p = w.known.center(ix, iy);
      REQUIRE(distance(p, pose.position) <= sensor.range + margin);
    }
}

TEST_CASE("volumetric and surface-frontier gains vanish in a known world") {
  World2D w = empty_room();
  w.known = w.truth;  // fully known
  for (double x : {2.0, 5.0, 8.0})
    for (double yaw : {0.0, kPi / 2.0, kPi}) {
      CHECK(node_gain(w, Pose{{x, 5.0}, yaw},
                      GainFunction{GainKind::Volumetric}) == 0.0);
      CHECK(node_gain(w, Pose{{x, 5.0}, yaw},
                      GainFunction{GainKind::SurfaceFrontier}) == 0.0);
    }
}

TEST_CASE("point-collection gain counts observed points in the neighborhood") {
  World2D w = empty_room();
  w.known = w.truth;
  w.points.push_back(CollectiblePoint{{5.5, 5.0}, 10.0, true, false});
  GainFunction fn{GainKind::PointCollection, 1.0};

  CHECK(node_gain(w, Pose{{5.0, 5.0}, 0.0}, fn) == doctest::Approx(10.0));
  // Orientation-independent.
  CHECK(node_gain(w, Pose{{5.0, 5.0}, kPi}, fn) == doctest::Approx(10.0));
  // Outside l_col.
  CHECK(node_gain(w, Pose{{4.0, 5.0}, 0.0}, fn) == 0.0);
  // Unobserved points do not count.
  w.points[0].observed = false;
  CHECK(node_gain(w, Pose{{5.0, 5.0}, 0.0}, fn) == 0.0);
  // Collected points do not count.
  w.points[0].observed = true;
  w.points[0].collected = true;
  CHECK(node_gain(w, Pose{{5.0, 5.0}, 0.0}, fn) == 0.0);
}

TEST_CASE("surface-frontier gain appears only when the FOV covers a wall end") {
  // Known free half-plane left of a vertical wall whose top end borders
  // Unknown space; everything right of the wall and above it is Unknown.
  World2D w = empty_room();
  for (int iy = 0; iy < w.known.ny(); ++iy)
    for (int ix = 0; ix < w.known.nx(); ++ix) {
      if (ix < 50)
        w.known.set(ix, iy, Cell::Free);
      else if (ix == 50 && iy <= 50)
        w.known.set(ix, iy, Cell::Occupied);
      // else Unknown: beyond the wall and past its end
    }
  GainFunction sf{GainKind::SurfaceFrontier};
  GainFunction vol{GainKind::Volumetric};

  double facing_mid = node_gain(w, Pose{{4.0, 2.0}, 0.0}, sf);
  double facing_end = node_gain(w, Pose{{4.0, 5.5}, 0.0}, sf);
  CHECK(facing_mid == 0.0);
  CHECK(facing_end > 0.0);
  // Containment: surface-frontier cells are a subset of unknown-visible.
  CHECK(facing_end <= node_gain(w, Pose{{4.0, 5.5}, 0.0}, vol));

  // Coarse pose sweep: positive gain only when the end (y ~ 5.05) can be
  // in view.
  for (double y = 1.0; y <= 9.0; y += 0.5) {
    double g = node_gain(w, Pose{{4.0, y}, 0.0}, sf);
    double dist_to_end = distance(Vec2{4.0, y}, Vec2{5.05, 5.05});
    if (g > 0.0) REQUIRE(dist_to_end <= 3.0 + 0.2);
  }
}

TEST_CASE("path gain over points uses set-union semantics") {
  World2D w = empty_room();
  w.known = w.truth;
  w.points.push_back(CollectiblePoint{{5.0, 5.0}, 7.0, true, false});
  double l_col = 1.0;

  SUBCASE("overlapping neighborhoods count a point once") {
    std::vector<Vec2> path{{4.5, 5.0}, {5.5, 5.0}};
    CHECK(path_gain_points(path, w, l_col) == doctest::Approx(7.0));
    GainFunction fn{GainKind::PointCollection, l_col};
    double additive = node_gain(w, Pose{{4.5, 5.0}, 0.0}, fn) +
                      node_gain(w, Pose{{5.5, 5.0}, 0.0}, fn);
    CHECK(additive == doctest::Approx(14.0));
  }

  SUBCASE("disjoint neighborhoods equal the sum of node gains") {
    w.points.push_back(CollectiblePoint{{8.0, 8.0}, 3.0, true, false});
    std::vector<Vec2> path{{5.0, 5.0}, {8.0, 8.0}};
    CHECK(path_gain_points(path, w, l_col) == doctest::Approx(10.0));
  }

  SUBCASE("union value never exceeds the additive value") {
    Rng rng(401);
    for (int trial = 0; trial < 50; ++trial) {
      World2D r = empty_room();
      r.known = r.truth;
      for (int i = 0; i < 12; ++i)
        r.points.push_back(CollectiblePoint{
            {rng.uniform(1.0, 9.0), rng.uniform(1.0, 9.0)},
            rng.uniform(0.0, 10.0), true, false});
      std::vector<Vec2> path;
      GainFunction fn{GainKind::PointCollection, l_col};
      double additive = 0.0;
      for (int i = 0; i < 5; ++i) {
        path.push_back({rng.uniform(1.0, 9.0), rng.uniform(1.0, 9.0)});
        additive += node_gain(r, Pose{path.back(), 0.0}, fn);
      }
      REQUIRE(path_gain_points(path, r, l_col) <= additive + 1e-9);
    }
  }
}

TEST_CASE("frontier classification applies both thresholds verbatim") {
  World2D w = empty_room();
  Pose pose{{5.0, 5.0}, 0.0};

  // Staring into fully unknown space: ratio 1.0.
  VisibleStats fresh = visible_stats(w.known, pose);
  CHECK(fresh.unknown == fresh.total);
  CHECK(classify_frontier(fresh, fresh.total));

  // Fully known FOV.
  w.known = w.truth;
  VisibleStats known = visible_stats(w.known, pose);
  CHECK(known.unknown == 0);
  CHECK_FALSE(classify_frontier(known, known.total));

  // Threshold boundaries.
  VisibleStats s;
  s.total = 100;
  s.unknown = 80;
  CHECK(classify_frontier(s, 100));  // 0.8 exactly
  s.unknown = 79;
  CHECK_FALSE(classify_frontier(s, 100));
  s.total = 60;
  s.unknown = 60;
  CHECK(classify_frontier(s, 100));  // visible ratio 0.6 exactly
  s.total = 59;
  s.unknown = 59;
  CHECK_FALSE(classify_frontier(s, 100));
}

TEST_CASE("motion schedule step counts match the kinematic limits") {
  Robot2D robot;  // v_max 0.5, omega_max 1.6, dt 0.2

  SUBCASE("1 m straight translation takes 10 steps") {
    detail::MotionExec exec;
    Pose pose{{2.0, 2.0}, 0.0};
    exec.start({{2.0, 2.0}, {3.0, 2.0}}, 0.0, pose);
    int rotate = 0, translate = 0, final_rotate = 0;
    while (!exec.done()) {
      auto phase = exec.phase;
      exec.step(pose, robot);
      if (phase == detail::MotionExec::Phase::Rotate) ++rotate;
      if (phase == detail::MotionExec::Phase::Translate) ++translate;
      if (phase == detail::MotionExec::Phase::FinalRotate) ++final_rotate;
    }
    CHECK(translate == 10);
    CHECK(rotate == 1);        // already aligned
    CHECK(final_rotate == 1);  // already aligned
    CHECK(pose.position.x == doctest::Approx(3.0));
  }

  SUBCASE("pi rotation takes 10 steps") {
    Pose pose{{0.0, 0.0}, 0.0};
    int steps = 0;
    while (!detail::MotionExec::turn_towards(pose, kPi, robot)) ++steps;
    CHECK(steps + 1 == 10);  // ceil(pi / 0.32)
    CHECK(pose.yaw == doctest::Approx(kPi));
  }

  SUBCASE("per-step displacement and rotation are clamped") {
    detail::MotionExec exec;
    Pose pose{{2.0, 2.0}, kPi / 2.0};
    exec.start({{2.0, 2.0}, {4.5, 3.0}}, -kPi / 2.0, pose);
    Pose prev = pose;
    while (!exec.done()) {
      exec.step(pose, robot);
      CHECK(distance(pose.position, prev.position) <=
            robot.v_max * robot.dt + 1e-12);
      CHECK(std::abs(MotionModel::angular_diff(prev.yaw, pose.yaw)) <=
            robot.omega_max * robot.dt + 1e-12);
      prev = pose;
    }
  }
}

TEST_CASE("world templates round-trip through json") {
  Rng rng(402);
  World2D w = make_room_world(rng, 8.0, 8.0, 2, 10);
  World2D back = world_from_json(world_to_json(w));
  CHECK(back.truth.cells() == w.truth.cells());
  CHECK(back.known.count(Cell::Unknown) == back.known.size());
  REQUIRE(back.points.size() == w.points.size());
  for (std::size_t i = 0; i < w.points.size(); ++i) {
    CHECK(back.points[i].position.x == w.points[i].position.x);
    CHECK(back.points[i].gain == w.points[i].gain);
    CHECK_FALSE(back.points[i].observed);
  }
}

TEST_CASE("episodes honor budget, replan frequency and world monotonicity") {
  Rng rng(403);
  World2D world = make_room_world(rng, 8.0, 8.0, 1, 25);
  SimConfig cfg;
  cfg.budget_s = 30.0;
  cfg.seed = 11;
  SimResult r = run_sim(world, free_start(world), cfg);

  CHECK(r.trace.size() == 150);               // 30 s at dt 0.2
  CHECK(r.plans == 30);                       // one per sim-second
  CHECK(r.realized_gain <= total_point_gain(world) + 1e-9);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    REQUIRE(r.trace[i].unknown <= r.trace[i - 1].unknown);
    REQUIRE(r.trace[i].realized >= r.trace[i - 1].realized);
    REQUIRE(distance(r.trace[i].pose.position, r.trace[i - 1].pose.position) <=
            cfg.robot.v_max * cfg.robot.dt + 1e-9);
  }
}

TEST_CASE("an easy point-collection episode collects something") {
  Rng rng(404);
  World2D world = make_room_world(rng, 8.0, 8.0, 0, 30);
  SimConfig cfg;
  cfg.budget_s = 60.0;
  cfg.seed = 12;
  SimResult r = run_sim(world, free_start(world), cfg);
  CHECK(r.realized_gain > 0.0);
}

TEST_CASE("exploration episodes realize revealed cells and replay exactly") {
  Rng rng(405);
  World2D world = make_room_world(rng, 8.0, 8.0, 2, 0);
  SimConfig cfg;
  cfg.gain.kind = GainKind::Volumetric;
  cfg.annulus = AnnulusParams(1.5, 3.0, 20, 10);
  cfg.budget_s = 20.0;
  cfg.seed = 13;

  SimResult a = run_sim(world, free_start(world), cfg);
  SimResult b = run_sim(world, free_start(world), cfg);
  CHECK(a.trace_jsonl() == b.trace_jsonl());
  CHECK(a.realized_gain <= static_cast<double>(world.truth.size()));
  CHECK(a.realized_gain > 0.0);
  CHECK(a.trace.back().unknown < world.truth.size());
}

TEST_CASE("surface-frontier gain never exceeds volumetric gain") {
  Rng rng(406);
  for (int trial = 0; trial < 5; ++trial) {
    World2D w = make_room_world(rng, 8.0, 8.0, 2, 0);
    sense(w, Pose{{4.0, 4.0}, rng.uniform(0.0, 2.0 * kPi)});
    for (int i = 0; i < 40; ++i) {
      Pose pose{{rng.uniform(0.5, 7.5), rng.uniform(0.5, 7.5)},
                rng.uniform(0.0, 2.0 * kPi)};
      REQUIRE(node_gain(w, pose, GainFunction{GainKind::SurfaceFrontier}) <=
              node_gain(w, pose, GainFunction{GainKind::Volumetric}));
    }
  }
}
