#pragma once

// Shared generators for property-style tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ipp/core.hpp"
#include "ipp/rng.hpp"

namespace ipp::testing {

// Random connected symmetric graph with positive costs and non-negative
// gains. Undirected edge count capped at `max_undirected`. A positive
// `quantum` snaps gains and costs to its multiples so that sums over
// short paths are exact in double precision (dyadic quanta only).
inline PlanGraph random_symmetric_graph(Rng& rng, int num_vertices,
                                        int max_undirected,
                                        double max_gain = 10.0,
                                        double max_cost = 4.0,
                                        double quantum = 0.0) {
  auto snap = [&](double x, double lo) {
    if (quantum <= 0.0) return x;
    return std::max(lo, std::round(x / quantum) * quantum);
  };
  PlanGraph g;
  for (int i = 0; i < num_vertices; ++i)
    g.add_vertex(Vec2{rng.uniform(0, 10), rng.uniform(0, 10)},
                 snap(rng.uniform(0, max_gain), 0.0));

  // Spanning tree first, then random extra edges.
  int edges = 0;
  for (int i = 1; i < num_vertices && edges < max_undirected; ++i) {
    int j = static_cast<int>(rng.uniform_index(i));
    g.add_edge_sym(static_cast<VertexId>(j), static_cast<VertexId>(i),
                   snap(rng.uniform(0.5, max_cost), 0.5));
    ++edges;
  }
  int attempts = 4 * max_undirected;
  while (edges < max_undirected && attempts-- > 0) {
    auto a = static_cast<VertexId>(rng.uniform_index(num_vertices));
    auto b = static_cast<VertexId>(rng.uniform_index(num_vertices));
    if (a == b || g.has_edge(a, b)) continue;
    g.add_edge_sym(a, b, snap(rng.uniform(0.5, max_cost), 0.5));
    ++edges;
  }
  return g;
}

inline Path random_walk(Rng& rng, const PlanGraph& g, VertexId start,
                        int max_steps) {
  Path p(g, start);
  for (int i = 0; i < max_steps; ++i) {
    const auto& adj = g.out_edges(p.back());
    if (adj.empty()) break;
    p = p.extend(adj[rng.uniform_index(adj.size())].to);
  }
  return p;
}

// Star graph: hub (id 0) plus `leaves` spokes, symmetric unit-cost edges.
inline PlanGraph star_graph(int leaves, double hub_gain, double leaf_gain) {
  PlanGraph g;
  g.add_vertex(Vec2{0, 0}, hub_gain);
  for (int i = 0; i < leaves; ++i) {
    double a = 2.0 * 3.14159265358979 * i / leaves;
    VertexId leaf = g.add_vertex(Vec2{std::cos(a), std::sin(a)}, leaf_gain);
    g.add_edge_sym(0, leaf, 1.0);
  }
  return g;
}

}  // namespace ipp::testing
