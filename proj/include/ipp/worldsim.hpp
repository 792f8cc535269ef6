#pragma once

// 2D occupancy-grid active-perception simulator: sensing, the three task
// gain functions, frontier classification, and time-stepped episodes
// with fixed-frequency replanning on an incrementally built graph.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ipp/executor.hpp"
#include "ipp/grid2d.hpp"
#include "ipp/rrag.hpp"

namespace ipp {

struct Pose {
  Vec2 position;
  double yaw = 0.0;
};

struct SensorModel {
  double fov = std::acos(-1.0) / 2.0;  // 90 degrees
  double range = 3.0;
  int rays = 181;                      // 0.5 degree spacing
};

struct CollectiblePoint {
  Vec2 position;
  double gain = 0.0;  // in [0, 10]
  bool observed = false;
  bool collected = false;
};

// Ground-truth grid plus the robot's running estimate. The estimate is
// only ever written from ground truth, so it never contradicts it.
struct World2D {
  Grid2D truth;
  Grid2D known;
  std::vector<CollectiblePoint> points;

  explicit World2D(Grid2D truth_grid)
      : truth(std::move(truth_grid)),
        known(truth.nx(), truth.ny(), truth.resolution(), Cell::Unknown) {}

  std::size_t unknown_cells() const { return known.count(Cell::Unknown); }
};

// Ray sweep over the sensor FOV. Cells along each ray are marked Free
// until the first Occupied ground-truth cell (marked Occupied), then the
// ray stops. Returns newly revealed cell counts.
struct SenseResult {
  std::size_t revealed = 0;
  std::size_t revealed_occupied = 0;
};

inline SenseResult sense(World2D& w, const Pose& pose,
                         const SensorModel& sensor = {}) {
  SenseResult out;
  const double step = w.truth.resolution() * 0.5;
  for (int r = 0; r < sensor.rays; ++r) {
    double frac = sensor.rays > 1 ? static_cast<double>(r) / (sensor.rays - 1)
                                  : 0.5;
    double angle = pose.yaw - sensor.fov / 2.0 + frac * sensor.fov;
    double dx = std::cos(angle), dy = std::sin(angle);
    int last = -1;
    for (double t = 0.0; t <= sensor.range; t += step) {
      Vec2 p{pose.position.x + t * dx, pose.position.y + t * dy};
      if (!w.truth.in_bounds(p)) break;
      int ix = w.truth.cell_x(p.x), iy = w.truth.cell_y(p.y);
      int idx = static_cast<int>(w.truth.index(ix, iy));
      if (idx == last) continue;
      last = idx;
      Cell actual = w.truth.at(ix, iy);
      if (actual == Cell::Occupied) {
        if (w.known.at(ix, iy) == Cell::Unknown) {
          w.known.set(ix, iy, Cell::Occupied);
          ++out.revealed;
          ++out.revealed_occupied;
        }
        break;
      }
      if (w.known.at(ix, iy) == Cell::Unknown) {
        w.known.set(ix, iy, Cell::Free);
        ++out.revealed;
      }
    }
  }
  for (auto& pt : w.points) {
    if (pt.observed) continue;
    if (w.known.in_bounds(pt.position) &&
        w.known.at(pt.position) == Cell::Free)
      pt.observed = true;
  }
  return out;
}

// Unoccluded-FOV cell statistics on the current estimate: rays pass
// through Unknown space and stop at estimated-Occupied cells.
struct VisibleStats {
  std::size_t total = 0;             // unique cells swept
  std::size_t unknown = 0;           // of those, Unknown
  std::size_t surface_frontier = 0;  // Unknown and 8-adjacent to Occupied
};

inline VisibleStats visible_stats(const Grid2D& known, const Pose& pose,
                                  const SensorModel& sensor = {}) {
  const double step = known.resolution() * 0.5;
  std::vector<std::uint8_t> seen(known.size(), 0);
  VisibleStats out;
  auto occupied_adjacent = [&](int ix, int iy) {
    for (int ddy = -1; ddy <= 1; ++ddy)
      for (int ddx = -1; ddx <= 1; ++ddx) {
        if (ddx == 0 && ddy == 0) continue;
        if (known.in_bounds(ix + ddx, iy + ddy) &&
            known.at(ix + ddx, iy + ddy) == Cell::Occupied)
          return true;
      }
    return false;
  };
  for (int r = 0; r < sensor.rays; ++r) {
    double frac = sensor.rays > 1 ? static_cast<double>(r) / (sensor.rays - 1)
                                  : 0.5;
    double angle = pose.yaw - sensor.fov / 2.0 + frac * sensor.fov;
    double dx = std::cos(angle), dy = std::sin(angle);
    for (double t = 0.0; t <= sensor.range; t += step) {
      Vec2 p{pose.position.x + t * dx, pose.position.y + t * dy};
      if (!known.in_bounds(p)) break;
      int ix = known.cell_x(p.x), iy = known.cell_y(p.y);
      Cell c = known.at(ix, iy);
      std::uint8_t& mark = seen[known.index(ix, iy)];
      if (!mark) {
        mark = 1;
        ++out.total;
        if (c == Cell::Unknown) {
          ++out.unknown;
          if (occupied_adjacent(ix, iy)) ++out.surface_frontier;
        }
      }
      if (c == Cell::Occupied) break;
    }
  }
  return out;
}

enum class GainKind { PointCollection, Volumetric, SurfaceFrontier };

struct GainFunction {
  GainKind kind = GainKind::PointCollection;
  double l_col = 1.0;  // collection neighborhood radius
};

// Orientation-independent for point collection; FOV-based otherwise.
inline double node_gain(const World2D& w, const Pose& pose,
                        const GainFunction& fn,
                        const SensorModel& sensor = {}) {
  if (fn.kind == GainKind::PointCollection) {
    double g = 0.0;
    for (const auto& pt : w.points)
      if (pt.observed && !pt.collected &&
          distance(pt.position, pose.position) <= fn.l_col)
        g += pt.gain;
    return g;
  }
  VisibleStats s = visible_stats(w.known, pose, sensor);
  return fn.kind == GainKind::Volumetric
             ? static_cast<double>(s.unknown)
             : static_cast<double>(s.surface_frontier);
}

// Union of collection neighborhoods along a pose sequence: every
// uncollected observed point counts once.
inline double path_gain_points(const std::vector<Vec2>& positions,
                               const World2D& w, double l_col) {
  double g = 0.0;
  for (const auto& pt : w.points) {
    if (!pt.observed || pt.collected) continue;
    for (const auto& p : positions)
      if (distance(pt.position, p) <= l_col) {
        g += pt.gain;
        break;
      }
  }
  return g;
}

// Frontier test with two ratio thresholds; `hist_max_visible` is
// the all-time maximum of `stats.total` at this node (updated by the
// caller before the call).
inline bool classify_frontier(const VisibleStats& stats,
                              std::size_t hist_max_visible,
                              double min_unknown_ratio = 0.8,
                              double min_visible_ratio = 0.6) {
  if (stats.total == 0 || hist_max_visible == 0) return false;
  double unknown_ratio =
      static_cast<double>(stats.unknown) / static_cast<double>(stats.total);
  double visible_ratio = static_cast<double>(stats.total) /
                         static_cast<double>(hist_max_visible);
  return unknown_ratio >= min_unknown_ratio && visible_ratio >= min_visible_ratio;
}

// --- Procedural worlds ------------------------------------------------------

// Rectangular room with a solid border, random axis-aligned interior
// walls (each with a door gap), and collectible points in free space.
inline World2D make_room_world(Rng& rng, double width = 12.0,
                               double height = 12.0, int walls = 3,
                               int points = 40, double resolution = 0.1) {
  int nx = static_cast<int>(std::llround(width / resolution));
  int ny = static_cast<int>(std::llround(height / resolution));
  Grid2D g(nx, ny, resolution, Cell::Free);
  auto rect = [&](double x0, double y0, double x1, double y1) {
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        Vec2 p = g.center(ix, iy);
        if (p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1)
          g.set(ix, iy, Cell::Occupied);
      }
  };
  double b = 2.0 * resolution;
  rect(0, 0, width, b);
  rect(0, height - b, width, height);
  rect(0, 0, b, height);
  rect(width - b, 0, width, height);
  for (int wi = 0; wi < walls; ++wi) {
    bool vertical = rng.uniform() < 0.5;
    double thickness = 0.2;
    if (vertical) {
      double x = rng.uniform(0.2 * width, 0.8 * width);
      double door = rng.uniform(0.15 * height, 0.65 * height);
      rect(x - thickness / 2, 0, x + thickness / 2, door);
      rect(x - thickness / 2, door + 1.2, x + thickness / 2, height);
    } else {
      double y = rng.uniform(0.2 * height, 0.8 * height);
      double door = rng.uniform(0.15 * width, 0.65 * width);
      rect(0, y - thickness / 2, door, y + thickness / 2);
      rect(door + 1.2, y - thickness / 2, width, y + thickness / 2);
    }
  }
  World2D w(std::move(g));
  ClearanceField xi(w.truth, 0.3, /*unknown_blocks=*/false);
  int placed = 0, guard = 100 * points;
  while (placed < points && guard-- > 0) {
    Vec2 p{rng.uniform(0.5, width - 0.5), rng.uniform(0.5, height - 0.5)};
    if (!(xi.clearance(p) > 0.0)) continue;
    w.points.push_back(CollectiblePoint{p, rng.uniform(0.0, 10.0)});
    ++placed;
  }
  return w;
}

// World template serialization: ground truth as row strings ('.' Free,
// '#' Occupied, '?' Unknown) plus the collectible points. The estimate
// starts fully Unknown on load.
inline nlohmann::json world_to_json(const World2D& w) {
  nlohmann::json j;
  j["nx"] = w.truth.nx();
  j["ny"] = w.truth.ny();
  j["resolution"] = w.truth.resolution();
  auto rows = nlohmann::json::array();
  for (int iy = 0; iy < w.truth.ny(); ++iy) {
    std::string row(static_cast<std::size_t>(w.truth.nx()), '?');
    for (int ix = 0; ix < w.truth.nx(); ++ix) {
      Cell c = w.truth.at(ix, iy);
      row[ix] = c == Cell::Free ? '.' : c == Cell::Occupied ? '#' : '?';
    }
    rows.push_back(row);
  }
  j["rows"] = std::move(rows);
  auto pts = nlohmann::json::array();
  for (const auto& p : w.points)
    pts.push_back({{"x", p.position.x}, {"y", p.position.y}, {"gain", p.gain}});
  j["points"] = std::move(pts);
  return j;
}

inline World2D world_from_json(const nlohmann::json& j) {
  Grid2D g(j.at("nx").get<int>(), j.at("ny").get<int>(),
           j.at("resolution").get<double>(), Cell::Unknown);
  const auto& rows = j.at("rows");
  for (int iy = 0; iy < g.ny(); ++iy) {
    const std::string row = rows.at(iy).get<std::string>();
    for (int ix = 0; ix < g.nx(); ++ix) {
      char c = row.at(ix);
      g.set(ix, iy, c == '.' ? Cell::Free
                             : c == '#' ? Cell::Occupied : Cell::Unknown);
    }
  }
  World2D w(std::move(g));
  for (const auto& p : j.at("points"))
    w.points.push_back(CollectiblePoint{
        Vec2{p.at("x").get<double>(), p.at("y").get<double>()},
        p.at("gain").get<double>()});
  return w;
}

// Deterministic start pose: the ground-truth cell center with the
// largest clearance.
inline Pose default_start(const World2D& w) {
  ClearanceField xi(w.truth, 0.0, /*unknown_blocks=*/false);
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

// --- Episode ---------------------------------------------------------------

struct Robot2D {
  double v_max = 0.5;
  double omega_max = 1.6;
  double dt = 0.2;
  double collision_radius = 0.3;
};

struct SimConfig {
  PlannerSpec planner = PlannerSpec::nbs(1, 100);
  Criterion criterion = Criterion::ExpectedGain;
  GainFunction gain;
  AnnulusParams annulus{1.0, 2.0, 20, 15};  // point-collection defaults
  Robot2D robot;
  SensorModel sensor;
  double budget_s = 120.0;
  double replan_period_s = 1.0;
  double l_gain = 5.0;
  double l_edge = 5.0;
  int gain_eval_rays = 37;  // coarser sweep for node-gain estimates
  std::uint64_t seed = 0;
  FlsOptions fls{300, 0.0};
};

struct SimStep {
  double t = 0.0;
  Pose pose;
  double realized = 0.0;         // cumulative
  std::size_t unknown = 0;       // cells still Unknown
};

struct SimResult {
  double realized_gain = 0.0;
  std::size_t plans = 0;
  std::vector<SimStep> trace;

  // Fixed-format dump used for byte-identical replay checks and the
  // JSON-lines trace file.
  std::string trace_jsonl() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& s : trace)
      os << "{\"t\":" << s.t << ",\"x\":" << s.pose.position.x
         << ",\"y\":" << s.pose.position.y << ",\"yaw\":" << s.pose.yaw
         << ",\"realized\":" << s.realized << ",\"unknown\":" << s.unknown
         << "}\n";
    return os.str();
  }
};

namespace detail {

// Motion executor for the rotate-translate-rotate schedule along a
// polyline, clamped by v_max / omega_max per step.
struct MotionExec {
  enum class Phase { Rotate, Translate, FinalRotate, Done };
  std::vector<Vec2> waypoints;
  double target_yaw = 0.0;
  std::size_t seg = 0;
  Phase phase = Phase::Done;

  void start(std::vector<Vec2> wps, double final_yaw, Pose& pose) {
    waypoints = std::move(wps);
    target_yaw = final_yaw;
    seg = 0;
    phase = waypoints.size() > 1 ? Phase::Rotate : Phase::FinalRotate;
    (void)pose;
  }

  bool done() const { return phase == Phase::Done; }

  // Advances one timestep; returns true when the move completed.
  bool step(Pose& pose, const Robot2D& robot) {
    switch (phase) {
      case Phase::Rotate: {
        Vec2 to = waypoints[seg + 1];
        double dir = std::atan2(to.y - pose.position.y, to.x - pose.position.x);
        if (turn_towards(pose, dir, robot)) phase = Phase::Translate;
        break;
      }
      case Phase::Translate: {
        Vec2 to = waypoints[seg + 1];
        double d = distance(pose.position, to);
        double adv = robot.v_max * robot.dt;
        if (d <= adv) {
          pose.position = to;
          ++seg;
          phase = seg + 1 < waypoints.size() ? Phase::Rotate : Phase::FinalRotate;
        } else {
          pose.position.x += (to.x - pose.position.x) / d * adv;
          pose.position.y += (to.y - pose.position.y) / d * adv;
        }
        break;
      }
      case Phase::FinalRotate:
        if (turn_towards(pose, target_yaw, robot)) phase = Phase::Done;
        break;
      case Phase::Done:
        break;
    }
    return done();
  }

  static bool turn_towards(Pose& pose, double target, const Robot2D& robot) {
    double diff = MotionModel::angular_diff(pose.yaw, target);
    double max_turn = robot.omega_max * robot.dt;
    if (std::abs(diff) <= max_turn) {
      pose.yaw = target;
      return true;
    }
    pose.yaw += diff > 0 ? max_turn : -max_turn;
    return false;
  }
};

// Dijkstra route from `start` to the nearest frontier vertex, excluding
// `start` itself. Returns the vertex sequence after `start`, or empty
// when no frontier is reachable.
inline std::vector<VertexId> path_to_nearest_frontier(const PlanGraph& g,
                                                      VertexId start) {
  const std::size_t n = g.num_vertices();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<VertexId> prev(n, kInvalidVertex);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[start] = 0.0;
  pq.push({0.0, start});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u != start && g.is_frontier(u)) {
      std::vector<VertexId> path;
      for (VertexId v = u; v != start; v = prev[v]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& e : g.out_edges(u)) {
      double nd = d + e.cost;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        prev[e.to] = u;
        pq.push({nd, e.to});
      }
    }
  }
  return {};
}

}  // namespace detail

// Runs one active-perception episode: incremental RRAG construction,
// fixed-frequency replanning, rotate-translate-rotate motion, sensing
// and gain realization at every timestep.
inline SimResult run_sim(World2D world, Pose start, const SimConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, 1));
  MotionModel motion{cfg.robot.v_max, cfg.robot.omega_max,
                     MotionModel::Metric::Time};
  SimResult result;

  // Initialization spin: four scans cover the full circle so the start
  // position has positive clearance in the unknown-blocks field.
  for (int q = 0; q < 4; ++q)
    sense(world, Pose{start.position, start.yaw + q * std::acos(-1.0) / 2.0},
          cfg.sensor);
  ClearanceField xi(world.known, cfg.robot.collision_radius);
  if (!(xi.clearance(start.position) > 0.0))
    throw std::runtime_error("sim: start pose in collision");
  // Physical collision is judged against ground truth; the conservative
  // unknown-blocking field above is for planning only.
  const ClearanceField xi_truth(world.truth, cfg.robot.collision_radius,
                                /*unknown_blocks=*/false);

  ClusterGraph cg;
  add_cluster(cg, start.position, cfg.annulus, motion);
  std::map<VertexId, std::size_t> hist_visible;

  auto refresh = [&](Vec2 robot_pos) {
    xi = ClearanceField(world.known, cfg.robot.collision_radius);
    graph_update(cg, robot_pos, cfg.l_gain, cfg.l_edge, xi, nullptr,
                 cfg.annulus.yaw_count);
    rrag_expand(cg, cfg.annulus, xi, motion, rng, true, cfg.fls);
    SensorModel eval = cfg.sensor;
    eval.rays = cfg.gain_eval_rays;
    for (ClusterId c = 0; c < cg.num_clusters(); ++c) {
      if (distance(cg.positions[c], robot_pos) > cfg.l_gain) continue;
      double point_g = 0.0;
      if (cfg.gain.kind == GainKind::PointCollection)
        point_g = node_gain(world, Pose{cg.positions[c], 0.0}, cfg.gain, eval);
      for (VertexId v : cg.members[c]) {
        Pose node_pose{cg.positions[c], cg.yaw_of(v, cfg.annulus.yaw_count)};
        VisibleStats s = visible_stats(world.known, node_pose, eval);
        switch (cfg.gain.kind) {
          case GainKind::PointCollection:
            cg.graph.set_gain(v, point_g);
            break;
          case GainKind::Volumetric:
            cg.graph.set_gain(v, static_cast<double>(s.unknown));
            break;
          case GainKind::SurfaceFrontier:
            cg.graph.set_gain(v, static_cast<double>(s.surface_frontier));
            break;
        }
        auto& hist = hist_visible[v];
        hist = std::max(hist, s.total);
        cg.graph.set_frontier(v, classify_frontier(s, hist));
      }
    }
  };

  Pose pose = start;
  const int steps = static_cast<int>(std::llround(cfg.budget_s / cfg.robot.dt));
  const int replan_every = std::max(
      1, static_cast<int>(std::llround(cfg.replan_period_s / cfg.robot.dt)));

  std::deque<VertexId> plan;           // vertices still to visit
  detail::MotionExec exec;
  std::optional<IntermediateToken> token;
  VertexId at_vertex = cg.members[0][0];  // valid when the robot is at a node
  VertexId edge_from = kInvalidVertex, edge_to = kInvalidVertex;

  // Removes the intermediate when it is still the newest cluster;
  // otherwise it stays behind as a permanent one-member cluster.
  auto drop_token = [&] {
    if (!token) return;
    if (!cg.members.empty() && cg.members.back().size() == 1 &&
        cg.members.back()[0] == token->vertex)
      remove_intermediate(cg, *token);
    token.reset();
  };

  auto begin_edge = [&](VertexId u, VertexId v) {
    edge_from = u;
    edge_to = v;
    at_vertex = kInvalidVertex;
    std::vector<Vec2> wps;
    auto it = cg.fls_edges.find({u, v});
    if (it != cg.fls_edges.end()) {
      wps = it->second;
    } else if (distance(cg.graph.position(u), cg.graph.position(v)) > 1e-9) {
      wps = {pose.position, cg.graph.position(v)};
    } else {
      wps = {pose.position};  // turn in place
    }
    exec.start(std::move(wps), cg.yaw_of(v, cfg.annulus.yaw_count), pose);
  };

  for (int k = 0; k < steps; ++k) {
    double t = k * cfg.robot.dt;
    if (k % replan_every == 0) {
      // Replan boundary. Mid-edge on a straight graph edge the current
      // position is grafted in as an intermediate vertex; mid-edge on an
      // FLS polyline (or an edge leaving a previous intermediate) the
      // robot plans from the upcoming vertex and finishes the edge first.
      bool mid_edge = at_vertex == kInvalidVertex;
      bool on_token_edge = mid_edge && token &&
                           (edge_from == token->vertex ||
                            edge_to == token->vertex);
      // Revalidation may have doomed the edge under the robot (clearance
      // from the discretized field is not monotone off cell centers); a
      // vanished edge cannot be split either.
      bool on_fls_edge =
          mid_edge && (cg.fls_edges.count({edge_from, edge_to}) > 0 ||
                       !cg.graph.has_edge(edge_from, edge_to));
      VertexId resume_to = edge_to;
      if (on_token_edge || (token && !mid_edge && at_vertex == token->vertex))
        token.reset();  // edges stay; cluster becomes permanent
      else
        drop_token();
      refresh(pose.position);
      bool split = mid_edge && !on_token_edge && !on_fls_edge &&
                   cg.graph.has_edge(edge_from, resume_to);
      VertexId plan_start;
      if (!mid_edge)
        plan_start = at_vertex;
      else if (split) {
        token = insert_intermediate(cg, edge_from, resume_to, pose.position,
                                    cfg.annulus, motion, xi, true, rng, cfg.fls);
        plan_start = token->vertex;
      } else {
        plan_start = resume_to;
      }
      double remaining = cfg.budget_s - t;
      CriterionContext ctx(cfg.criterion, remaining);
      PlanResult pr = cfg.planner.plan(cg.graph, plan_start, remaining, ctx);
      ++result.plans;
      plan.assign(pr.best_path.vertices().begin(), pr.best_path.vertices().end());
      plan.pop_front();  // the start location itself
      if (plan.empty()) {
        // No path improved on staying put: every reachable gain is spent.
        // Head for the nearest frontier so newly revealed space can feed
        // the next plans (classic frontier-driven exploration fallback).
        auto fb = detail::path_to_nearest_frontier(cg.graph, plan_start);
        plan.assign(fb.begin(), fb.end());
      }
      if (!mid_edge || split) {
        if (!plan.empty()) {
          begin_edge(plan_start, plan.front());
          plan.pop_front();
        } else if (split) {
          // Nothing better than finishing the current edge.
          begin_edge(token->vertex, resume_to);
        } else {
          exec.phase = detail::MotionExec::Phase::Done;
          edge_from = edge_to = kInvalidVertex;
        }
      }
      // Otherwise exec keeps running towards resume_to and the new plan
      // takes over on arrival.
    }

    if (!exec.done()) {
      if (exec.step(pose, cfg.robot)) {
        at_vertex = edge_to;
        // The current plan may route through the intermediate again; its
        // edges must survive until the plan no longer references it.
        bool token_needed =
            token && (std::find(plan.begin(), plan.end(), token->vertex) !=
                          plan.end() ||
                      (at_vertex == token->vertex && !plan.empty()));
        if (!token_needed) drop_token();
        if (!plan.empty()) {
          begin_edge(at_vertex, plan.front());
          plan.pop_front();
        }
      }
      // Edge validation samples the discretized field at half-cell steps,
      // so contact below one grid resolution is not resolvable; only
      // deeper penetration counts as a physical collision.
      if (!(xi_truth.clearance(pose.position) > -xi_truth.resolution()))
        throw std::runtime_error("sim: collision during execution");
    }

    SenseResult sr = sense(world, pose, cfg.sensor);
    switch (cfg.gain.kind) {
      case GainKind::PointCollection:
        for (auto& pt : world.points)
          if (pt.observed && !pt.collected &&
              distance(pt.position, pose.position) <= cfg.gain.l_col) {
            pt.collected = true;
            result.realized_gain += pt.gain;
          }
        break;
      case GainKind::Volumetric:
        result.realized_gain += static_cast<double>(sr.revealed);
        break;
      case GainKind::SurfaceFrontier:
        result.realized_gain += static_cast<double>(sr.revealed_occupied);
        break;
    }
    result.trace.push_back(SimStep{t, pose, result.realized_gain,
                                   world.unknown_cells()});
  }
  return result;
}

}  // namespace ipp
