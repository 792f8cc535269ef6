#pragma once

// Synthetic benchmark graph generators and the radius-limited online
// perception protocol.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ipp/core.hpp"
#include "ipp/rng.hpp"

namespace ipp {

enum class GainMode { Clustered, Scattered };

struct GridGraphSpec {
  double extent = 25.0;        // meters per side
  GainMode gain_mode = GainMode::Scattered;
  double gain_min = 0.0;
  double gain_max = 100.0;
  int cluster_count = 8;
  double cluster_radius = 2.5;  // 5.0 for the 50 m extent
  std::uint64_t seed = 0;
  double spacing = 1.0;         // lattice spacing
};

// 8-connected unit lattice with Euclidean edge costs; start vertex at
// (0,0) is id 0.
inline PlanGraph generate_grid(const GridGraphSpec& spec) {
  if (!(spec.extent > 0.0) || !(spec.spacing > 0.0) || spec.cluster_count < 1)
    throw std::invalid_argument("invalid grid graph spec");

  int n = static_cast<int>(std::llround(spec.extent / spec.spacing)) + 1;
  Rng rng(derive_seed(spec.seed, 0));

  PlanGraph g;
  auto id = [n](int ix, int iy) {
    return static_cast<VertexId>(iy * n + ix);
  };
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      g.add_vertex(Vec2{ix * spec.spacing, iy * spec.spacing});

  if (spec.gain_mode == GainMode::Scattered) {
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      g.set_gain(v, rng.uniform(spec.gain_min, spec.gain_max));
  } else {
    // Disc clusters fully inside the bounds, rejection-free by clamping
    // the center range.
    double r = spec.cluster_radius;
    double lo = std::min(r, spec.extent / 2.0);
    double hi = std::max(spec.extent - r, spec.extent / 2.0);
    std::vector<Vec2> centers;
    for (int c = 0; c < spec.cluster_count; ++c)
      centers.push_back(Vec2{rng.uniform(lo, hi), rng.uniform(lo, hi)});
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      bool inside = false;
      for (const auto& c : centers)
        if (distance(g.position(v), c) <= r) {
          inside = true;
          break;
        }
      g.set_gain(v, inside ? rng.uniform(spec.gain_min, spec.gain_max) : 0.0);
    }
  }

  // Symmetric directed 8-neighborhood; each undirected pair added once.
  const int dx[] = {1, 0, 1, -1};
  const int dy[] = {0, 1, 1, 1};
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      for (int k = 0; k < 4; ++k) {
        int jx = ix + dx[k], jy = iy + dy[k];
        if (jx < 0 || jx >= n || jy < 0 || jy >= n) continue;
        double cost = distance(g.position(id(ix, iy)), g.position(id(jx, jy)));
        g.add_edge_sym(id(ix, iy), id(jx, jy), cost);
      }
  return g;
}

// Discovered-subgraph state for the online perception protocol: the
// robot reveals everything within radius rho of each visited vertex.
class PerceptionState {
 public:
  PerceptionState(const PlanGraph& truth, double rho)
      : truth_(&truth), rho_(rho), discovered_(truth.num_vertices(), false) {
    if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  }

  void observe(VertexId at) {
    if (at >= truth_->num_vertices()) throw std::out_of_range("bad vertex");
    visited_.push_back(at);
    Vec2 p = truth_->position(at);
    for (VertexId v = 0; v < truth_->num_vertices(); ++v)
      if (distance(truth_->position(v), p) <= rho_) discovered_[v] = true;
  }

  bool discovered(VertexId v) const { return discovered_[v]; }
  const std::vector<VertexId>& visited() const { return visited_; }
  const PlanGraph& truth() const { return *truth_; }
  double rho() const { return rho_; }

  // Frontier: discovered vertex farther than f_frac * rho from every
  // visited vertex, so observing from it would extend coverage.
  std::vector<VertexId> frontier_vertices(double f_frac = 0.8) const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < truth_->num_vertices(); ++v) {
      if (!discovered_[v]) continue;
      bool near_visited = false;
      for (VertexId w : visited_)
        if (distance(truth_->position(v), truth_->position(w)) <= f_frac * rho_) {
          near_visited = true;
          break;
        }
      if (!near_visited) out.push_back(v);
    }
    return out;
  }

  // Restriction of the true graph to discovered vertices and induced
  // edges. Vertex ids are preserved; undiscovered vertices carry zero
  // gain and no edges.
  PlanGraph discovered_graph() const {
    PlanGraph g;
    auto frontier = frontier_vertices();
    std::vector<bool> is_frontier(truth_->num_vertices(), false);
    for (VertexId v : frontier) is_frontier[v] = true;
    for (VertexId v = 0; v < truth_->num_vertices(); ++v) {
      const auto& vx = truth_->vertex(v);
      g.add_vertex(vx.position, discovered_[v] ? vx.gain : 0.0, vx.yaw_index,
                   discovered_[v] && is_frontier[v]);
    }
    for (VertexId v = 0; v < truth_->num_vertices(); ++v) {
      if (!discovered_[v]) continue;
      for (const auto& e : truth_->out_edges(v))
        if (discovered_[e.to]) g.add_edge(v, e.to, e.cost);
    }
    return g;
  }

 private:
  const PlanGraph* truth_;
  double rho_;
  std::vector<bool> discovered_;
  std::vector<VertexId> visited_;
};

}  // namespace ipp
