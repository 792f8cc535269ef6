#pragma once

// Incremental annulus-graph construction: minimum/maximum edge length
// sampling, yaw clusters, clearance-shortcut collision checking, the
// fallback local sampling planner, and local graph updating.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ipp/core.hpp"
#include "ipp/grid2d.hpp"
#include "ipp/rng.hpp"

namespace ipp {

struct AnnulusParams {
  double l_min = 1.0;
  double l_max = 2.0;
  int n_sample = 20;  // draw attempts per node
  int n_new = 50;     // node draws per expansion round
  int yaw_count = 8;

  AnnulusParams() = default;
  AnnulusParams(double lmin, double lmax, int nsample = 20, int nnew = 50,
                int k = 8)
      : l_min(lmin), l_max(lmax), n_sample(nsample), n_new(nnew), yaw_count(k) {
    if (!(l_min > 0.0) || l_max < l_min)
      throw std::invalid_argument("require 0 < l_min <= l_max");
    if (n_sample < 1 || n_new < 1 || yaw_count < 1)
      throw std::invalid_argument("counts must be >= 1");
  }
};

// Edge cost model. Distance mode keeps costs commensurate with meters
// (turn-in-place is charged the equivalent arc v_max * t_turn); Time mode
// charges the rotate-translate-rotate schedule in seconds.
struct MotionModel {
  double v_max = 0.5;
  double omega_max = 1.6;
  enum class Metric { Distance, Time } metric = Metric::Distance;

  double turn_cost(double dyaw) const {
    double t = std::abs(dyaw) / omega_max;
    return metric == Metric::Time ? t : t * v_max;
  }

  double edge_cost(double length, double yaw_from, double direction,
                   double yaw_to) const {
    if (metric == Metric::Distance) return length;
    return turn_cost(angular_diff(yaw_from, direction)) + length / v_max +
           turn_cost(angular_diff(direction, yaw_to));
  }

  static double angular_diff(double a, double b) {
    double d = std::fmod(b - a, 2.0 * std::acos(-1.0));
    double pi = std::acos(-1.0);
    if (d > pi) d -= 2.0 * pi;
    if (d < -pi) d += 2.0 * pi;
    return d;
  }
};

// Collision check between two individually free configurations of the
// translating disc robot (eta = 1): adjacency shortcut first, dense
// interpolation at half the grid resolution otherwise.
inline bool collision_free_edge(Vec2 x1, Vec2 x2, const ClearanceField& xi) {
  double len = distance(x1, x2);
  if (len < std::max(xi.clearance(x1), xi.clearance(x2))) return true;
  double delta = xi.resolution() * 0.5;
  int steps = static_cast<int>(std::ceil(len / delta));
  for (int i = 0; i <= steps; ++i) {
    double t = static_cast<double>(i) / steps;
    Vec2 p{x1.x + t * (x2.x - x1.x), x1.y + t * (x2.y - x1.y)};
    if (!(xi.clearance(p) > 0.0)) return false;
  }
  return true;
}

inline bool waypoints_free(const std::vector<Vec2>& wps,
                           const ClearanceField& xi) {
  for (std::size_t i = 0; i + 1 < wps.size(); ++i)
    if (!collision_free_edge(wps[i], wps[i + 1], xi)) return false;
  return !wps.empty();
}

inline double waypoint_length(const std::vector<Vec2>& wps) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < wps.size(); ++i)
    len += distance(wps[i], wps[i + 1]);
  return len;
}

// --- Fallback local sampling planner ---------------------------------------

struct FlsOptions {
  int max_samples = 2000;
  double time_budget_ms = 0.0;  // 0 disables the wall-clock cutoff
};

struct FlsPath {
  std::vector<Vec2> waypoints;  // includes both endpoints
  double length = 0.0;
};

// RRT*-style local planner confined to the axis-aligned box around the
// endpoints inflated by l_max per side. Deterministic for a given RNG
// stream when the wall-clock cutoff is disabled.
inline std::optional<FlsPath> fls(Vec2 start, Vec2 goal,
                                  const ClearanceField& xi, double l_max,
                                  Rng& rng, const FlsOptions& opts = {}) {
  double lo_x = std::max(0.0, std::min(start.x, goal.x) - l_max);
  double hi_x = std::min(xi.width(), std::max(start.x, goal.x) + l_max);
  double lo_y = std::max(0.0, std::min(start.y, goal.y) - l_max);
  double hi_y = std::min(xi.height(), std::max(start.y, goal.y) + l_max);
  double step = l_max / 2.0, radius = l_max / 2.0;

  std::vector<Vec2> nodes{start};
  std::vector<int> parent{-1};
  std::vector<double> cost{0.0};
  int goal_parent = -1;
  double goal_cost = std::numeric_limits<double>::infinity();

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double, std::milli>(opts.time_budget_ms);
  for (int it = 0; it < opts.max_samples; ++it) {
    if (opts.time_budget_ms > 0.0 &&
        std::chrono::steady_clock::now() > deadline)
      break;
    Vec2 q{rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
    // Nearest-extend.
    int nearest = 0;
    for (int i = 1; i < static_cast<int>(nodes.size()); ++i)
      if (distance(nodes[i], q) < distance(nodes[nearest], q)) nearest = i;
    double d = distance(nodes[nearest], q);
    if (d < 1e-9) continue;
    if (d > step) {
      q = Vec2{nodes[nearest].x + (q.x - nodes[nearest].x) * step / d,
               nodes[nearest].y + (q.y - nodes[nearest].y) * step / d};
    }
    if (!(xi.clearance(q) > 0.0)) continue;
    // Choose-parent within the neighbor radius.
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      double di = distance(nodes[i], q);
      if (di > radius && i != nearest) continue;
      double c = cost[i] + di;
      if (c < best_cost && collision_free_edge(nodes[i], q, xi)) {
        best = i;
        best_cost = c;
      }
    }
    if (best < 0) continue;
    int id = static_cast<int>(nodes.size());
    nodes.push_back(q);
    parent.push_back(best);
    cost.push_back(best_cost);
    // Rewire.
    for (int i = 0; i < static_cast<int>(nodes.size()) - 1; ++i) {
      double di = distance(nodes[i], q);
      if (di > radius) continue;
      if (best_cost + di < cost[i] && collision_free_edge(q, nodes[i], xi)) {
        parent[i] = id;
        cost[i] = best_cost + di;
      }
    }
    // Goal connection.
    double dg = distance(q, goal);
    if (dg <= radius && best_cost + dg < goal_cost &&
        collision_free_edge(q, goal, xi)) {
      goal_parent = id;
      goal_cost = best_cost + dg;
    }
  }
  if (goal_parent < 0) return std::nullopt;
  FlsPath out;
  std::vector<Vec2> rev{goal};
  for (int i = goal_parent; i >= 0; i = parent[i]) rev.push_back(nodes[i]);
  out.waypoints.assign(rev.rbegin(), rev.rend());
  out.length = waypoint_length(out.waypoints);
  return out;
}

// --- Cluster graph ----------------------------------------------------------

using ClusterId = std::uint32_t;
inline constexpr ClusterId kInvalidCluster = std::numeric_limits<ClusterId>::max();

// Planning graph plus the position-cluster bookkeeping: every sampled
// position owns either K yaw-indexed member vertices (RRAG) or a single
// best-yaw vertex (RRAT / RRAT*).
struct ClusterGraph {
  PlanGraph graph;
  std::vector<Vec2> positions;                  // per cluster
  std::vector<std::vector<VertexId>> members;   // per cluster
  std::vector<ClusterId> cluster_of;            // per vertex
  std::map<std::pair<VertexId, VertexId>, std::vector<Vec2>> fls_edges;

  std::size_t num_clusters() const { return positions.size(); }

  ClusterId nearest_cluster(Vec2 p) const {
    if (positions.empty()) throw std::logic_error("empty cluster graph");
    ClusterId best = 0;
    for (ClusterId c = 1; c < positions.size(); ++c)
      if (distance(positions[c], p) < distance(positions[best], p)) best = c;
    return best;
  }

  std::vector<ClusterId> near_clusters(Vec2 p, double l) const {
    std::vector<ClusterId> out;
    for (ClusterId c = 0; c < positions.size(); ++c)
      if (distance(positions[c], p) <= l) out.push_back(c);
    return out;
  }

  double yaw_of(VertexId v, int yaw_count) const {
    int idx = graph.vertex(v).yaw_index;
    return idx < 0 ? 0.0 : 2.0 * std::acos(-1.0) * idx / yaw_count;
  }

  // Member whose yaw best aligns with `direction`; ties to the lower
  // yaw index (members are stored in yaw order).
  VertexId aligned_member(ClusterId c, double direction, int yaw_count) const {
    VertexId best = members[c][0];
    double best_diff = std::numeric_limits<double>::infinity();
    for (VertexId v : members[c]) {
      double d = std::abs(MotionModel::angular_diff(yaw_of(v, yaw_count),
                                                    direction));
      if (d < best_diff - 1e-15) {
        best = v;
        best_diff = d;
      }
    }
    return best;
  }

  // Directed inter-cluster out-degree, counting straight and FLS edges
  // to other clusters (intra-cluster yaw edges excluded).
  std::size_t inter_cluster_out_degree(ClusterId c) const {
    std::size_t n = 0;
    for (VertexId v : members[c])
      for (const auto& e : graph.out_edges(v))
        if (cluster_of[e.to] != c) ++n;
    return n;
  }
};

// Creates the K-yaw cluster with bidirectional adjacent-yaw turn edges.
inline ClusterId add_cluster(ClusterGraph& cg, Vec2 position,
                             const AnnulusParams& params,
                             const MotionModel& motion) {
  int k = params.yaw_count;
  ClusterId c = static_cast<ClusterId>(cg.positions.size());
  cg.positions.push_back(position);
  cg.members.emplace_back();
  for (int i = 0; i < k; ++i) {
    VertexId v = cg.graph.add_vertex(position, 0.0, i);
    cg.members[c].push_back(v);
    cg.cluster_of.push_back(c);
  }
  if (k > 1) {
    double turn = motion.turn_cost(2.0 * std::acos(-1.0) / k);
    for (int i = 0; i < k; ++i) {
      int j = (i + 1) % k;
      if (j == i) continue;
      cg.graph.add_edge_sym(cg.members[c][i], cg.members[c][j], turn);
    }
  }
  return c;
}

// Single-vertex cluster for the tree planners; yaw chosen by gain.
inline ClusterId add_tree_node(
    ClusterGraph& cg, Vec2 position, const AnnulusParams& params,
    const std::function<double(Vec2, double)>& gain_of) {
  int k = params.yaw_count;
  int best_i = 0;
  double best_g = -1.0;
  for (int i = 0; i < k; ++i) {
    double yaw = 2.0 * std::acos(-1.0) * i / k;
    double g = gain_of ? gain_of(position, yaw) : 0.0;
    if (g > best_g) {
      best_g = g;
      best_i = i;
    }
  }
  ClusterId c = static_cast<ClusterId>(cg.positions.size());
  cg.positions.push_back(position);
  VertexId v = cg.graph.add_vertex(position, std::max(best_g, 0.0), best_i);
  cg.members.push_back({v});
  cg.cluster_of.push_back(c);
  return c;
}

// --- Node sampling ----------------------------------------------------------

// Up to n_sample uniform draws; rejects closer than l_min to the nearest
// cluster; pulls draws beyond l_max in to l_min from the nearest, along
// the draw direction. On an empty graph the distance tests are skipped.
inline std::optional<Vec2> sample_free(const ClusterGraph& cg,
                                       const AnnulusParams& params,
                                       const ClearanceField& xi, Rng& rng) {
  for (int i = 0; i < params.n_sample; ++i) {
    Vec2 q{rng.uniform(0.0, xi.width()), rng.uniform(0.0, xi.height())};
    if (!cg.positions.empty()) {
      ClusterId nearest = cg.nearest_cluster(q);
      Vec2 np = cg.positions[nearest];
      double d = distance(q, np);
      if (d < params.l_min) continue;
      if (d > params.l_max)
        q = Vec2{np.x + params.l_min * (q.x - np.x) / d,
                 np.y + params.l_min * (q.y - np.y) / d};
    }
    if (xi.clearance(q) > 0.0) return q;
  }
  return std::nullopt;
}

namespace detail {

// Directed connection attempt between clusters: straight line first,
// FLS fallback when enabled. Registers the edge on the yaw members best
// aligned with the traversal direction.
inline bool connect_clusters(ClusterGraph& cg, ClusterId from, ClusterId to,
                             const AnnulusParams& params,
                             const MotionModel& motion,
                             const ClearanceField& xi, bool use_fls, Rng& rng,
                             const FlsOptions& fls_opts) {
  Vec2 a = cg.positions[from], b = cg.positions[to];
  double dir = std::atan2(b.y - a.y, b.x - a.x);
  VertexId u = cg.aligned_member(from, dir, params.yaw_count);
  VertexId v = cg.aligned_member(to, dir, params.yaw_count);
  if (cg.graph.has_edge(u, v)) return true;

  std::vector<Vec2> wps;
  double len = 0.0;
  if (collision_free_edge(a, b, xi)) {
    len = distance(a, b);
  } else if (use_fls) {
    auto p = fls(a, b, xi, params.l_max, rng, fls_opts);
    if (!p) return false;
    wps = std::move(p->waypoints);
    len = p->length;
  } else {
    return false;
  }
  double cost = motion.edge_cost(len, cg.yaw_of(u, params.yaw_count), dir,
                                 cg.yaw_of(v, params.yaw_count));
  cg.graph.add_edge(u, v, cost);
  if (!wps.empty()) cg.fls_edges[{u, v}] = std::move(wps);
  return true;
}

}  // namespace detail

// Alg. RRAG expansion round: n_new sampling rounds, each new cluster is
// gated on a feasible connection to the nearest cluster, then connected
// bidirectionally to every cluster within l_max (each direction checked
// independently).
inline void rrag_expand(ClusterGraph& cg, const AnnulusParams& params,
                        const ClearanceField& xi, const MotionModel& motion,
                        Rng& rng, bool use_fls = true,
                        const FlsOptions& fls_opts = {}) {
  for (int i = 0; i < params.n_new; ++i) {
    auto q = sample_free(cg, params, xi, rng);
    if (!q) continue;
    if (cg.positions.empty()) {
      add_cluster(cg, *q, params, motion);
      continue;
    }
    ClusterId nearest = cg.nearest_cluster(*q);
    bool reachable = collision_free_edge(cg.positions[nearest], *q, xi);
    if (!reachable && use_fls)
      reachable = fls(cg.positions[nearest], *q, xi, params.l_max, rng,
                      fls_opts)
                      .has_value();
    if (!reachable) continue;
    auto near = cg.near_clusters(*q, params.l_max);
    ClusterId c = add_cluster(cg, *q, params, motion);
    for (ClusterId n : near) {
      detail::connect_clusters(cg, n, c, params, motion, xi, use_fls, rng,
                               fls_opts);
      detail::connect_clusters(cg, c, n, params, motion, xi, use_fls, rng,
                               fls_opts);
    }
  }
}

// --- Tree variants ----------------------------------------------------------

struct AnnulusTree {
  ClusterGraph cg;
  std::vector<ClusterId> parent;  // per cluster, root points to itself
  std::vector<double> cost;       // tree-path cost from root
  ClusterId root = 0;

  VertexId vertex(ClusterId c) const { return cg.members[c][0]; }
};

inline AnnulusTree make_tree_root(Vec2 position, const AnnulusParams& params,
                                  const std::function<double(Vec2, double)>& gain_of) {
  AnnulusTree t;
  t.root = add_tree_node(t.cg, position, params, gain_of);
  t.parent = {t.root};
  t.cost = {0.0};
  return t;
}

namespace detail {

inline double tree_edge_cost(const AnnulusTree& t, ClusterId from,
                             ClusterId to, double length,
                             const AnnulusParams& params,
                             const MotionModel& motion) {
  Vec2 a = t.cg.positions[from], b = t.cg.positions[to];
  double dir = std::atan2(b.y - a.y, b.x - a.x);
  return motion.edge_cost(length, t.cg.yaw_of(t.vertex(from), params.yaw_count),
                          dir, t.cg.yaw_of(t.vertex(to), params.yaw_count));
}

// Straight-or-FLS feasibility plus the resulting path length.
inline std::optional<std::pair<double, std::vector<Vec2>>> connect_length(
    Vec2 a, Vec2 b, const ClearanceField& xi, double l_max, bool use_fls,
    Rng& rng, const FlsOptions& fls_opts) {
  if (collision_free_edge(a, b, xi))
    return std::make_pair(distance(a, b), std::vector<Vec2>{});
  if (!use_fls) return std::nullopt;
  auto p = fls(a, b, xi, l_max, rng, fls_opts);
  if (!p) return std::nullopt;
  return std::make_pair(p->length, std::move(p->waypoints));
}

}  // namespace detail

// Alg. RRAT: single parent edge to the nearest node.
inline void rrat_expand(AnnulusTree& t, const AnnulusParams& params,
                        const ClearanceField& xi, const MotionModel& motion,
                        const std::function<double(Vec2, double)>& gain_of,
                        Rng& rng, bool use_fls = true,
                        const FlsOptions& fls_opts = {}) {
  for (int i = 0; i < params.n_new; ++i) {
    auto q = sample_free(t.cg, params, xi, rng);
    if (!q) continue;
    ClusterId nearest = t.cg.nearest_cluster(*q);
    auto conn = detail::connect_length(t.cg.positions[nearest], *q, xi,
                                       params.l_max, use_fls, rng, fls_opts);
    if (!conn) continue;
    ClusterId c = add_tree_node(t.cg, *q, params, gain_of);
    double cost = detail::tree_edge_cost(t, nearest, c, conn->first, params,
                                         motion);
    t.cg.graph.add_edge(t.vertex(nearest), t.vertex(c), cost);
    if (!conn->second.empty())
      t.cg.fls_edges[{t.vertex(nearest), t.vertex(c)}] = std::move(conn->second);
    t.parent.push_back(nearest);
    t.cost.push_back(t.cost[nearest] + cost);
  }
}

// Alg. RRAT*: min-cost parent among Near(l_max), then rewiring of the
// neighbors through the new node when their cost improves.
inline void rrat_star_expand(AnnulusTree& t, const AnnulusParams& params,
                             const ClearanceField& xi,
                             const MotionModel& motion,
                             const std::function<double(Vec2, double)>& gain_of,
                             Rng& rng, bool use_fls = true,
                             const FlsOptions& fls_opts = {}) {
  for (int i = 0; i < params.n_new; ++i) {
    auto q = sample_free(t.cg, params, xi, rng);
    if (!q) continue;
    ClusterId nearest = t.cg.nearest_cluster(*q);
    auto gate = detail::connect_length(t.cg.positions[nearest], *q, xi,
                                       params.l_max, use_fls, rng, fls_opts);
    if (!gate) continue;
    auto near = t.cg.near_clusters(*q, params.l_max);

    ClusterId c = add_tree_node(t.cg, *q, params, gain_of);

    // Choose-parent.
    ClusterId best = nearest;
    double best_len = gate->first;
    std::vector<Vec2> best_wps = gate->second;
    double best_cost = t.cost[nearest] +
                       detail::tree_edge_cost(t, nearest, c, gate->first,
                                              params, motion);
    for (ClusterId n : near) {
      if (n == nearest) continue;
      auto conn = detail::connect_length(t.cg.positions[n], *q, xi,
                                         params.l_max, use_fls, rng, fls_opts);
      if (!conn) continue;
      double cost = t.cost[n] +
                    detail::tree_edge_cost(t, n, c, conn->first, params, motion);
      if (cost < best_cost) {
        best = n;
        best_cost = cost;
        best_len = conn->first;
        best_wps = std::move(conn->second);
      }
    }
    double edge = detail::tree_edge_cost(t, best, c, best_len, params, motion);
    t.cg.graph.add_edge(t.vertex(best), t.vertex(c), edge);
    if (!best_wps.empty()) t.cg.fls_edges[{t.vertex(best), t.vertex(c)}] = best_wps;
    t.parent.push_back(best);
    t.cost.push_back(t.cost[best] + edge);

    // Rewire neighbors through the new node.
    for (ClusterId n : near) {
      if (n == t.root || n == best) continue;
      auto conn = detail::connect_length(*q, t.cg.positions[n], xi,
                                         params.l_max, use_fls, rng, fls_opts);
      if (!conn) continue;
      double cost = t.cost[c] +
                    detail::tree_edge_cost(t, c, n, conn->first, params, motion);
      if (cost < t.cost[n]) {
        t.cg.graph.remove_edge(t.vertex(t.parent[n]), t.vertex(n));
        t.cg.fls_edges.erase({t.vertex(t.parent[n]), t.vertex(n)});
        double edge_n = detail::tree_edge_cost(t, c, n, conn->first, params,
                                               motion);
        t.cg.graph.add_edge(t.vertex(c), t.vertex(n), edge_n);
        if (!conn->second.empty())
          t.cg.fls_edges[{t.vertex(c), t.vertex(n)}] = std::move(conn->second);
        t.parent[n] = c;
        double drop = t.cost[n] - (t.cost[c] + edge_n);
        // Propagate the improvement to the subtree.
        std::vector<ClusterId> stack{n};
        while (!stack.empty()) {
          ClusterId x = stack.back();
          stack.pop_back();
          t.cost[x] -= drop;
          for (ClusterId y = 0; y < t.parent.size(); ++y)
            if (y != t.root && t.parent[y] == x && y != x) stack.push_back(y);
        }
      }
    }
  }
}

// --- Graph updating ---------------------------------------------------------

// Revalidates edges whose endpoints lie within l_edge of the robot and
// recomputes member gains within l_gain. Straight edges re-run the
// clearance check; FLS edges revalidate their stored waypoints.
inline void graph_update(ClusterGraph& cg, Vec2 robot, double l_gain,
                         double l_edge, const ClearanceField& xi,
                         const std::function<double(Vec2, double)>& gain_of,
                         int yaw_count) {
  if (gain_of) {
    for (ClusterId c = 0; c < cg.positions.size(); ++c) {
      if (distance(cg.positions[c], robot) > l_gain) continue;
      for (VertexId v : cg.members[c])
        cg.graph.set_gain(v, std::max(0.0, gain_of(cg.positions[c],
                                                   cg.yaw_of(v, yaw_count))));
    }
  }
  std::vector<std::pair<VertexId, VertexId>> doomed;
  for (VertexId u = 0; u < cg.graph.num_vertices(); ++u) {
    Vec2 a = cg.graph.position(u);
    for (const auto& e : cg.graph.out_edges(u)) {
      Vec2 b = cg.graph.position(e.to);
      if (distance(a, robot) > l_edge && distance(b, robot) > l_edge) continue;
      if (cg.cluster_of[u] == cg.cluster_of[e.to]) continue;  // turn in place
      auto it = cg.fls_edges.find({u, e.to});
      bool ok = it != cg.fls_edges.end() ? waypoints_free(it->second, xi)
                                         : collision_free_edge(a, b, xi);
      if (!ok) doomed.emplace_back(u, e.to);
    }
  }
  for (auto [u, v] : doomed) {
    cg.graph.remove_edge(u, v);
    cg.fls_edges.erase({u, v});
  }
}

inline bool reachable_from_root(const AnnulusTree& t, ClusterId c) {
  ClusterId x = c;
  for (std::size_t guard = 0; guard <= t.parent.size(); ++guard) {
    if (x == t.root) return true;
    if (t.parent[x] == x) return false;
    x = t.parent[x];
  }
  return false;
}

// RRAT root advance: prunes every child branch of the old root except
// the selected one. Pruned vertices stay in the graph but lose their
// edges and gain.
inline void prune_rrat_root(AnnulusTree& t, ClusterId new_root) {
  if (t.parent[new_root] != t.root)
    throw std::invalid_argument("new root must be a child of the root");
  std::vector<ClusterId> doomed;
  for (ClusterId c = 0; c < t.parent.size(); ++c)
    if (c != t.root && t.parent[c] == t.root && c != new_root) doomed.push_back(c);
  while (!doomed.empty()) {
    ClusterId c = doomed.back();
    doomed.pop_back();
    t.cg.graph.remove_edge(t.vertex(t.parent[c]), t.vertex(c));
    t.cg.fls_edges.erase({t.vertex(t.parent[c]), t.vertex(c)});
    t.cg.graph.set_gain(t.vertex(c), 0.0);
    t.parent[c] = c;  // orphan marker
    for (ClusterId y = 0; y < t.parent.size(); ++y)
      if (y != c && t.parent[y] == c) doomed.push_back(y);
  }
  double base = t.cost[new_root];
  t.cg.graph.remove_edge(t.vertex(t.root), t.vertex(new_root));
  t.cg.fls_edges.erase({t.vertex(t.root), t.vertex(new_root)});
  ClusterId old_root = t.root;
  t.parent[old_root] = old_root;
  t.cg.graph.set_gain(t.vertex(old_root), 0.0);
  t.root = new_root;
  t.parent[new_root] = new_root;
  for (ClusterId c = 0; c < t.parent.size(); ++c)
    if (reachable_from_root(t, c)) t.cost[c] -= base;
  t.cost[new_root] = 0.0;
}

// RRAT* root advance: rebuilds the parent structure as the shortest-path
// tree from the new root over all feasible annulus connections.
inline void rrat_star_reroot(AnnulusTree& t, ClusterId new_root,
                             const AnnulusParams& params,
                             const ClearanceField& xi,
                             const MotionModel& motion, Rng& rng,
                             bool use_fls = true,
                             const FlsOptions& fls_opts = {}) {
  const std::size_t n = t.cg.num_clusters();
  // Remove all current tree edges.
  for (ClusterId c = 0; c < n; ++c) {
    if (c == t.root || t.parent[c] == c) continue;
    t.cg.graph.remove_edge(t.vertex(t.parent[c]), t.vertex(c));
    t.cg.fls_edges.erase({t.vertex(t.parent[c]), t.vertex(c)});
  }
  // Dijkstra over feasible pairs within [l_min, l_max].
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<ClusterId> par(n);
  for (ClusterId c = 0; c < n; ++c) par[c] = c;
  dist[new_root] = 0.0;
  std::vector<bool> done(n, false);
  for (;;) {
    ClusterId u = n;
    for (ClusterId c = 0; c < n; ++c)
      if (!done[c] && dist[c] < (u == n ? std::numeric_limits<double>::infinity()
                                        : dist[u]))
        u = c;
    if (u == n) break;
    done[u] = true;
    for (ClusterId v = 0; v < n; ++v) {
      if (done[v] || v == u) continue;
      double d = distance(t.cg.positions[u], t.cg.positions[v]);
      if (d > params.l_max) continue;
      auto conn = detail::connect_length(t.cg.positions[u], t.cg.positions[v],
                                         xi, params.l_max, use_fls, rng,
                                         fls_opts);
      if (!conn) continue;
      double cost = dist[u] +
                    detail::tree_edge_cost(t, u, v, conn->first, params, motion);
      if (cost < dist[v]) {
        dist[v] = cost;
        par[v] = u;
      }
    }
  }
  t.root = new_root;
  for (ClusterId c = 0; c < n; ++c) {
    t.parent[c] = c == new_root ? new_root : par[c];
    t.cost[c] = dist[c];
    if (c != new_root && par[c] != c) {
      auto conn = detail::connect_length(t.cg.positions[par[c]],
                                         t.cg.positions[c], xi, params.l_max,
                                         use_fls, rng, fls_opts);
      double edge = detail::tree_edge_cost(t, par[c], c, conn->first, params,
                                           motion);
      t.cg.graph.add_edge(t.vertex(par[c]), t.vertex(c), edge);
      if (!conn->second.empty())
        t.cg.fls_edges[{t.vertex(par[c]), t.vertex(c)}] = std::move(conn->second);
    }
  }
}

// --- Mid-edge intermediate node (RRAG replanning) ---------------------------

struct IntermediateToken {
  VertexId vertex = kInvalidVertex;
  std::vector<std::pair<VertexId, VertexId>> added_edges;
};

// Splits the robot's current edge at `position`: the original edge is
// retained, bridging edges are added, and outgoing connections to all
// clusters within l_max are attempted.
inline IntermediateToken insert_intermediate(ClusterGraph& cg, VertexId from,
                                             VertexId to, Vec2 position,
                                             const AnnulusParams& params,
                                             const MotionModel& motion,
                                             const ClearanceField& xi,
                                             bool use_fls, Rng& rng,
                                             const FlsOptions& fls_opts = {}) {
  double full = cg.graph.edge_cost(from, to);
  if (full < 0.0) throw std::invalid_argument("intermediate: no such edge");
  Vec2 a = cg.graph.position(from), b = cg.graph.position(to);
  double frac = distance(a, b) > 0.0 ? distance(a, position) / distance(a, b)
                                     : 0.5;
  frac = std::clamp(frac, 0.0, 1.0);
  double dir = std::atan2(b.y - a.y, b.x - a.x);
  int yaw_idx = static_cast<int>(std::llround(
                    dir / (2.0 * std::acos(-1.0) / params.yaw_count))) %
                params.yaw_count;
  if (yaw_idx < 0) yaw_idx += params.yaw_count;

  IntermediateToken tok;
  tok.vertex = cg.graph.add_vertex(position, 0.0, yaw_idx);
  ClusterId c = static_cast<ClusterId>(cg.positions.size());
  cg.positions.push_back(position);
  cg.members.push_back({tok.vertex});
  cg.cluster_of.push_back(c);

  double c1 = std::max(full * frac, 1e-9);
  double c2 = std::max(full * (1.0 - frac), 1e-9);
  cg.graph.add_edge(from, tok.vertex, c1);
  cg.graph.add_edge(tok.vertex, to, c2);
  tok.added_edges.emplace_back(from, tok.vertex);
  tok.added_edges.emplace_back(tok.vertex, to);

  for (ClusterId n : cg.near_clusters(position, params.l_max)) {
    if (n == c || cg.cluster_of[from] == n || cg.cluster_of[to] == n) continue;
    double d = distance(position, cg.positions[n]);
    if (d < 1e-9) continue;
    double dirn = std::atan2(cg.positions[n].y - position.y,
                             cg.positions[n].x - position.x);
    VertexId tgt = cg.aligned_member(n, dirn, params.yaw_count);
    auto conn = detail::connect_length(position, cg.positions[n], xi,
                                       params.l_max, use_fls, rng, fls_opts);
    if (!conn) continue;
    double cost = motion.edge_cost(conn->first,
                                   cg.yaw_of(tok.vertex, params.yaw_count),
                                   dirn, cg.yaw_of(tgt, params.yaw_count));
    cg.graph.add_edge(tok.vertex, tgt, cost);
    tok.added_edges.emplace_back(tok.vertex, tgt);
    if (!conn->second.empty())
      cg.fls_edges[{tok.vertex, tgt}] = std::move(conn->second);
  }
  return tok;
}

// Restores the pre-insertion edge set; the intermediate cluster must be
// the most recently added one.
inline void remove_intermediate(ClusterGraph& cg, const IntermediateToken& tok) {
  if (cg.members.back().size() != 1 || cg.members.back()[0] != tok.vertex)
    throw std::logic_error("intermediate must be the newest cluster");
  for (auto [u, v] : tok.added_edges) {
    cg.graph.remove_edge(u, v);
    cg.fls_edges.erase({u, v});
  }
  cg.positions.pop_back();
  cg.members.pop_back();
  // The vertex itself stays in the graph (edgeless); keep cluster_of
  // aligned with vertex ids.
  cg.cluster_of.back() = kInvalidCluster;
}

// Connected components over clusters (undirected view), for the
// connectivity checks.
inline std::size_t cluster_components(const ClusterGraph& cg) {
  const std::size_t n = cg.num_clusters();
  std::vector<ClusterId> uf(n);
  for (ClusterId c = 0; c < n; ++c) uf[c] = c;
  std::function<ClusterId(ClusterId)> find = [&](ClusterId x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (VertexId u = 0; u < cg.graph.num_vertices(); ++u)
    for (const auto& e : cg.graph.out_edges(u))
      uf[find(cg.cluster_of[u])] = find(cg.cluster_of[e.to]);
  std::size_t roots = 0;
  for (ClusterId c = 0; c < n; ++c)
    if (find(c) == c) ++roots;
  return roots;
}

}  // namespace ipp
