#pragma once

// The four IPP planners (DBS, NBS, SPT, TSP) plus the exhaustive
// trail-enumeration oracle used as ground truth in tests.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ipp/core.hpp"
#include "ipp/criteria.hpp"

namespace ipp {

struct BeamParams {
  std::size_t beam_width = 1;
  std::size_t search_depth = 1;

  BeamParams(std::size_t b, std::size_t d) : beam_width(b), search_depth(d) {
    if (b < 1 || d < 1) throw std::invalid_argument("beam params must be >= 1");
  }
};

struct TspParams {
  double alpha = 0.5;

  explicit TspParams(double a) : alpha(a) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  }
};

struct PlanResult {
  Path best_path;
  std::uint64_t paths_expanded = 0;
  std::chrono::duration<double> wall_time{0.0};
};

namespace detail {

// Partial path as a shared-suffix chain: extension is O(1) in space,
// membership checks walk the chain (O(depth), as in the complexity
// analysis that caches cost/gain/ratio per beam entry).
struct ChainNode {
  VertexId v;
  std::shared_ptr<const ChainNode> parent;
  double cost;
  double gain;
};

using ChainPtr = std::shared_ptr<const ChainNode>;

inline bool chain_contains(const ChainNode* n, VertexId v) {
  for (; n != nullptr; n = n->parent.get())
    if (n->v == v) return true;
  return false;
}

inline bool chain_traversed(const ChainNode* n, VertexId from, VertexId to) {
  for (; n->parent != nullptr; n = n->parent.get())
    if (n->v == to && n->parent->v == from) return true;
  return false;
}

inline double chain_ratio(double gain, double cost) {
  if (cost > 0.0) return gain / cost;
  return gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline double chain_quality(const PlanGraph& g, const ChainNode& n,
                            const CriterionContext& ctx) {
  switch (ctx.criterion) {
    case Criterion::PathGain: return n.gain;
    case Criterion::PathRatio: return chain_ratio(n.gain, n.cost);
    case Criterion::ExpectedGain:
      return g.is_frontier(n.v) ? chain_ratio(n.gain, n.cost) * ctx.budget : n.gain;
  }
  return 0.0;
}

// Strict path preference on cached scalars.
inline bool chain_preferred(const ChainNode& a, const ChainNode& b) {
  double ra = chain_ratio(a.gain, a.cost), rb = chain_ratio(b.gain, b.cost);
  if (ra != rb) return ra > rb;
  if (a.gain != b.gain) return a.gain > b.gain;
  return a.cost < b.cost;
}

struct BeamEntry {
  ChainPtr node;
  std::uint64_t seq;  // insertion order, final tiebreak
};

// One pass over the chain: has the directed edge (from, to) been used,
// and is `to` already on the path?
struct ChainScan {
  bool traversed = false;
  bool visited = false;
};

inline ChainScan chain_scan(const ChainNode* n, VertexId from, VertexId to) {
  ChainScan r;
  for (const ChainNode* c = n; c != nullptr; c = c->parent.get())
    if (c->v == to) {
      r.visited = true;
      if (c->parent != nullptr && c->parent->v == from) {
        r.traversed = true;
        break;
      }
    }
  return r;
}

// Unmaterialized extension: chain nodes are allocated only for the
// candidates that survive beam selection.
struct Cand {
  std::uint32_t parent;  // index into the open list
  VertexId to;
  double cost, gain, ratio;
  std::uint64_t seq;
};

// Preference order with insertion-order tiebreak (older wins), matching
// incremental replace-if-strictly-preferred beam maintenance.
inline bool cand_before(const Cand& a, const Cand& b) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.seq < b.seq;
}

// Keeps the top-`width` candidates, restored to generation order.
inline void select_top(std::vector<Cand>& cands, std::size_t width) {
  if (cands.size() > width) {
    std::nth_element(cands.begin(), cands.begin() + width, cands.end(),
                     cand_before);
    cands.resize(width);
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.seq < b.seq; });
  }
}

inline Path chain_to_path(const PlanGraph& g, const ChainNode* n) {
  std::vector<VertexId> seq;
  for (; n != nullptr; n = n->parent.get()) seq.push_back(n->v);
  std::reverse(seq.begin(), seq.end());
  return Path::from_sequence(g, seq);
}

}  // namespace detail

// Depth-wise beam search: top-B paths kept per depth level.
inline PlanResult dbs(const PlanGraph& graph, VertexId start, double budget,
                      const BeamParams& params, const CriterionContext& ctx) {
  using namespace detail;
  auto t0 = std::chrono::steady_clock::now();

  auto root = std::make_shared<const ChainNode>(
      ChainNode{start, nullptr, 0.0, graph.gain(start)});
  ChainPtr best = root;
  double best_q = chain_quality(graph, *root, ctx);

  std::vector<BeamEntry> open{BeamEntry{root, 0}};
  std::vector<Cand> cands;
  std::uint64_t seq = 1;
  std::uint64_t expanded = 0;

  for (std::size_t d = 0; d < params.search_depth && !open.empty(); ++d) {
    cands.clear();
    for (std::uint32_t pi = 0; pi < open.size(); ++pi) {
      const ChainNode* p = open[pi].node.get();
      for (const auto& e : graph.out_edges(p->v)) {
        ChainScan scan = chain_scan(p, p->v, e.to);
        if (scan.traversed) continue;
        ++expanded;
        double cost = p->cost + e.cost;
        if (cost > budget) continue;
        double gain = p->gain + (scan.visited ? 0.0 : graph.gain(e.to));
        double ratio = chain_ratio(gain, cost);
        double q = ctx.criterion == Criterion::PathGain ? gain
                   : ctx.criterion == Criterion::PathRatio
                       ? ratio
                       : (graph.is_frontier(e.to) ? ratio * ctx.budget : gain);
        if (q > best_q) {
          best = std::make_shared<const ChainNode>(
              ChainNode{e.to, open[pi].node, cost, gain});
          best_q = q;
        }
        cands.push_back(Cand{pi, e.to, cost, gain, ratio, seq++});
      }
    }
    select_top(cands, params.beam_width);
    std::vector<BeamEntry> next;
    next.reserve(cands.size());
    for (const Cand& c : cands)
      next.push_back(BeamEntry{std::make_shared<const ChainNode>(ChainNode{
                                   c.to, open[c.parent].node, c.cost, c.gain}),
                               c.seq});
    open = std::move(next);
  }

  PlanResult result{chain_to_path(graph, best.get()), expanded,
                    std::chrono::steady_clock::now() - t0};
  return result;
}

// Node-wise beam search: top-B paths kept per terminal vertex.
inline PlanResult nbs(const PlanGraph& graph, VertexId start, double budget,
                      const BeamParams& params, const CriterionContext& ctx) {
  using namespace detail;
  auto t0 = std::chrono::steady_clock::now();

  auto root = std::make_shared<const ChainNode>(
      ChainNode{start, nullptr, 0.0, graph.gain(start)});
  ChainPtr best = root;
  double best_q = chain_quality(graph, *root, ctx);

  std::vector<std::vector<BeamEntry>> open(graph.num_vertices());
  open[start].push_back(BeamEntry{root, 0});
  std::vector<std::vector<Cand>> buckets(graph.num_vertices());
  std::vector<const BeamEntry*> parents;
  std::uint64_t seq = 1;
  std::uint64_t expanded = 0;

  for (std::size_t d = 0; d < params.search_depth; ++d) {
    for (auto& b : buckets) b.clear();
    parents.clear();
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
      for (const auto& entry : open[v]) {
        const ChainNode* p = entry.node.get();
        auto pi = static_cast<std::uint32_t>(parents.size());
        parents.push_back(&entry);
        for (const auto& e : graph.out_edges(v)) {
          ChainScan scan = chain_scan(p, v, e.to);
          if (scan.traversed) continue;
          ++expanded;
          double cost = p->cost + e.cost;
          if (cost > budget) continue;
          double gain = p->gain + (scan.visited ? 0.0 : graph.gain(e.to));
          double ratio = chain_ratio(gain, cost);
          double q = ctx.criterion == Criterion::PathGain ? gain
                     : ctx.criterion == Criterion::PathRatio
                         ? ratio
                         : (graph.is_frontier(e.to) ? ratio * ctx.budget
                                                    : gain);
          if (q > best_q) {
            best = std::make_shared<const ChainNode>(
                ChainNode{e.to, entry.node, cost, gain});
            best_q = q;
          }
          buckets[e.to].push_back(Cand{pi, e.to, cost, gain, ratio, seq++});
        }
      }
    }
    // Materialize into a fresh beam set: `parents` points into `open`.
    std::vector<std::vector<BeamEntry>> next(graph.num_vertices());
    bool any = false;
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
      auto& cands = buckets[v];
      select_top(cands, params.beam_width);
      next[v].reserve(cands.size());
      for (const Cand& c : cands)
        next[v].push_back(BeamEntry{
            std::make_shared<const ChainNode>(ChainNode{
                c.to, parents[c.parent]->node, c.cost, c.gain}),
            c.seq});
      any = any || !next[v].empty();
    }
    open = std::move(next);
    if (!any) break;
  }

  PlanResult result{chain_to_path(graph, best.get()), expanded,
                    std::chrono::steady_clock::now() - t0};
  return result;
}

namespace detail {

struct GainRange {
  double min = 0.0;
  double max = 0.0;
};

inline GainRange gain_range(const PlanGraph& g) {
  GainRange r{std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()};
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    r.min = std::min(r.min, g.gain(v));
    r.max = std::max(r.max, g.gain(v));
  }
  if (g.num_vertices() == 0) r = GainRange{0.0, 0.0};
  return r;
}

inline double gain_threshold(const PlanGraph& g, double alpha) {
  auto [g_min, g_max] = gain_range(g);
  return g_max - alpha * (g_max - g_min);
}

struct SsspResult {
  std::vector<double> dist;
  std::vector<VertexId> pred;
};

// Bellman-Ford with early exit; all costs are positive.
inline SsspResult bellman_ford(const PlanGraph& g, VertexId source) {
  SsspResult r;
  r.dist.assign(g.num_vertices(), std::numeric_limits<double>::infinity());
  r.pred.assign(g.num_vertices(), kInvalidVertex);
  r.dist[source] = 0.0;
  for (std::size_t round = 0; round + 1 < std::max<std::size_t>(g.num_vertices(), 1);
       ++round) {
    bool relaxed = false;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      if (!std::isfinite(r.dist[u])) continue;
      for (const auto& e : g.out_edges(u)) {
        double nd = r.dist[u] + e.cost;
        if (nd < r.dist[e.to]) {
          r.dist[e.to] = nd;
          r.pred[e.to] = u;
          relaxed = true;
        }
      }
    }
    if (!relaxed) break;
  }
  return r;
}

inline std::vector<VertexId> tree_path(const SsspResult& sp, VertexId source,
                                       VertexId target) {
  std::vector<VertexId> seq;
  for (VertexId v = target; v != source; v = sp.pred[v]) seq.push_back(v);
  seq.push_back(source);
  std::reverse(seq.begin(), seq.end());
  return seq;
}

inline SsspResult dijkstra(const PlanGraph& g, VertexId source) {
  SsspResult r;
  r.dist.assign(g.num_vertices(), std::numeric_limits<double>::infinity());
  r.pred.assign(g.num_vertices(), kInvalidVertex);
  r.dist[source] = 0.0;
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > r.dist[u]) continue;
    for (const auto& e : g.out_edges(u)) {
      double nd = d + e.cost;
      if (nd < r.dist[e.to]) {
        r.dist[e.to] = nd;
        r.pred[e.to] = u;
        pq.push({nd, e.to});
      }
    }
  }
  return r;
}

}  // namespace detail

// Shortest-path-tree planner: Bellman-Ford tree rooted at the start, one
// candidate root-to-vertex path per vertex passing the alpha threshold
// (frontier vertices always pass).
inline PlanResult spt_plan(const PlanGraph& graph, VertexId start, double budget,
                           double alpha, const CriterionContext& ctx) {
  auto t0 = std::chrono::steady_clock::now();
  auto sp = detail::bellman_ford(graph, start);
  double g_thr = detail::gain_threshold(graph, alpha);

  Path best(graph, start);
  double best_q = quality(best, ctx);
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    if (v == start || !std::isfinite(sp.dist[v])) continue;
    if (!(graph.gain(v) >= g_thr || graph.is_frontier(v))) continue;
    if (sp.dist[v] > budget) continue;
    Path candidate = Path::from_sequence(graph, detail::tree_path(sp, start, v));
    double q = quality(candidate, ctx);
    if (q > best_q) {
      best = candidate;
      best_q = q;
    }
  }
  return PlanResult{best, 0, std::chrono::steady_clock::now() - t0};
}

// TSP planner: node selection by gain threshold, all-pairs shortest paths
// among the selected nodes, nearest-neighbor tour with 2-opt improvement,
// legs executed while the budget allows.
inline PlanResult tsp_plan(const PlanGraph& graph, VertexId start, double budget,
                           const TspParams& params) {
  auto t0 = std::chrono::steady_clock::now();
  double g_thr = detail::gain_threshold(graph, params.alpha);

  std::vector<VertexId> selected;
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    if (v == start) continue;
    if (graph.gain(v) > g_thr || graph.is_frontier(v)) selected.push_back(v);
  }

  auto finish = [&](const Path& p) {
    return PlanResult{p, 0, std::chrono::steady_clock::now() - t0};
  };
  if (selected.empty()) return finish(Path(graph, start));

  // Shortest-path costs from each relevant source.
  std::vector<VertexId> sources{start};
  sources.insert(sources.end(), selected.begin(), selected.end());
  std::vector<detail::SsspResult> sp;
  sp.reserve(sources.size());
  for (VertexId s : sources) sp.push_back(detail::dijkstra(graph, s));

  auto dist = [&](std::size_t i, VertexId target) { return sp[i].dist[target]; };

  // Nearest-neighbor open tour from the start; unreachable nodes dropped.
  std::vector<std::size_t> order;  // indices into `sources`, excluding 0
  std::vector<bool> used(sources.size(), false);
  used[0] = true;
  std::size_t current = 0;
  for (;;) {
    std::size_t next = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sources.size(); ++i) {
      if (used[i]) continue;
      double d = dist(current, sources[i]);
      if (d < best_d) {
        best_d = d;
        next = i;
      }
    }
    if (!std::isfinite(best_d)) break;
    used[next] = true;
    order.push_back(next);
    current = next;
  }
  if (order.empty()) return finish(Path(graph, start));

  // 2-opt on the open tour (start fixed, endpoint free), capped number of
  // improvement attempts for determinism and bounded runtime.
  auto leg = [&](std::size_t from_idx, std::size_t to_idx) {
    return dist(from_idx, sources[to_idx]);
  };
  std::size_t attempts_left = 10 * order.size() * order.size();
  bool improved = true;
  while (improved && attempts_left > 0) {
    improved = false;
    for (std::size_t i = 0; i + 1 < order.size() && attempts_left > 0; ++i) {
      for (std::size_t j = i + 1; j < order.size() && attempts_left > 0; ++j) {
        --attempts_left;
        std::size_t before = (i == 0) ? 0 : order[i - 1];
        double removed = leg(before, order[i]);
        double added = leg(before, order[j]);
        if (j + 1 < order.size()) {
          removed += leg(order[j], order[j + 1]);
          added += leg(order[i], order[j + 1]);
        }
        if (added + 1e-12 < removed) {
          std::reverse(order.begin() + i, order.begin() + j + 1);
          improved = true;
        }
      }
    }
  }

  // Execute whole legs while the cumulative cost stays within budget.
  std::vector<VertexId> seq{start};
  double total = 0.0;
  std::size_t at = 0;
  for (std::size_t idx : order) {
    double leg_cost = leg(at, idx);
    if (!std::isfinite(leg_cost) || total + leg_cost > budget) break;
    auto piece = detail::tree_path(sp[at], sources[at], sources[idx]);
    seq.insert(seq.end(), piece.begin() + 1, piece.end());
    total += leg_cost;
    at = idx;
  }
  return finish(Path::from_sequence(graph, seq));
}

namespace detail {

struct EdgeIndexer {
  // Dense directed-edge ids in (source, adjacency position) order.
  std::vector<std::size_t> offset;

  explicit EdgeIndexer(const PlanGraph& g) {
    offset.assign(g.num_vertices() + 1, 0);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      offset[v + 1] = offset[v] + g.out_edges(v).size();
  }

  std::size_t id(VertexId v, std::size_t adj_pos) const {
    return offset[v] + adj_pos;
  }
};

struct WalkSearch {
  const PlanGraph& graph;
  const CriterionContext& ctx;
  double budget;
  int max_edge_uses;
  EdgeIndexer edges;
  std::vector<std::uint8_t> edge_uses;
  std::vector<std::uint16_t> visit_count;
  std::vector<VertexId> stack;
  std::vector<VertexId> best_seq;
  double best_q = -std::numeric_limits<double>::infinity();
  double cost = 0.0;
  double gain = 0.0;

  WalkSearch(const PlanGraph& g, const CriterionContext& c, double budget_,
             int max_uses)
      : graph(g), ctx(c), budget(budget_), max_edge_uses(max_uses), edges(g),
        edge_uses(g.num_edges(), 0), visit_count(g.num_vertices(), 0) {}

  double current_quality(VertexId v) const {
    double r = chain_ratio(gain, cost);
    switch (ctx.criterion) {
      case Criterion::PathGain: return gain;
      case Criterion::PathRatio: return r;
      case Criterion::ExpectedGain:
        return graph.is_frontier(v) ? r * ctx.budget : gain;
    }
    return 0.0;
  }

  void dfs(VertexId v) {
    double q = current_quality(v);
    if (q > best_q) {
      best_q = q;
      best_seq = stack;
    }
    const auto& adj = graph.out_edges(v);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      const auto& e = adj[i];
      std::size_t eid = edges.id(v, i);
      if (edge_uses[eid] >= max_edge_uses) continue;
      if (cost + e.cost > budget) continue;
      ++edge_uses[eid];
      bool first_visit = visit_count[e.to]++ == 0;
      cost += e.cost;
      if (first_visit) gain += graph.gain(e.to);
      stack.push_back(e.to);
      dfs(e.to);
      stack.pop_back();
      if (first_visit) gain -= graph.gain(e.to);
      cost -= e.cost;
      --visit_count[e.to];
      --edge_uses[eid];
    }
  }
};

}  // namespace detail

// Exhaustive enumeration of walks that use each directed edge at most
// `max_edge_uses` times. With max_edge_uses == 1 this enumerates trails.
inline PlanResult oracle_walks(const PlanGraph& graph, VertexId start,
                               double budget, const CriterionContext& ctx,
                               int max_edge_uses) {
  auto t0 = std::chrono::steady_clock::now();
  detail::WalkSearch search(graph, ctx, budget, max_edge_uses);
  search.visit_count[start] = 1;
  search.gain = graph.gain(start);
  search.stack.push_back(start);
  search.dfs(start);
  return PlanResult{Path::from_sequence(graph, search.best_seq), 0,
                    std::chrono::steady_clock::now() - t0};
}

// Ground-truth planner: enumerates every trail from the start within the
// budget. Guarded to small graphs.
inline PlanResult oracle_trails(const PlanGraph& graph, VertexId start,
                                double budget, const CriterionContext& ctx) {
  if (graph.num_edges() > 24)
    throw std::invalid_argument("oracle_trails: graph too large (> 24 directed edges)");
  return oracle_walks(graph, start, budget, ctx, 1);
}

enum class BeamKind { Dbs, Nbs };

// Path-count accounting from the complexity table: DBS expands at most
// |V|*D*B paths, NBS at most |E|*D*B.
inline bool expansion_count_audit(const PlanResult& result, const PlanGraph& graph,
                                  const BeamParams& params, BeamKind kind) {
  std::uint64_t unit = kind == BeamKind::Dbs
                           ? static_cast<std::uint64_t>(graph.num_vertices())
                           : static_cast<std::uint64_t>(graph.num_edges());
  return result.paths_expanded <=
         unit * params.search_depth * params.beam_width;
}

}  // namespace ipp
