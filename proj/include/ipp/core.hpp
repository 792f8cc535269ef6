#pragma once

// Directed weighted planning graph, path arithmetic, and the path
// preference relation shared by all planners.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ipp {

using VertexId = std::uint32_t;
inline constexpr VertexId kInvalidVertex = std::numeric_limits<VertexId>::max();

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct OutEdge {
  VertexId to = kInvalidVertex;
  double cost = 0.0;
};

// Directed simple graph with per-vertex gain, per-edge positive cost and
// vertex positions. Adjacency lists are kept sorted by target id so that
// iteration order is deterministic.
class PlanGraph {
 public:
  struct Vertex {
    Vec2 position;
    double gain = 0.0;
    int yaw_index = -1;  // -1 when the graph carries no orientation
    bool frontier = false;
  };

  VertexId add_vertex(Vec2 position, double gain = 0.0, int yaw_index = -1,
                      bool frontier = false) {
    if (gain < 0.0) throw std::invalid_argument("vertex gain must be >= 0");
    vertices_.push_back(Vertex{position, gain, yaw_index, frontier});
    adjacency_.emplace_back();
    return static_cast<VertexId>(vertices_.size() - 1);
  }

  // Inserts a directed edge; rejects self loops, duplicates and
  // non-positive costs.
  void add_edge(VertexId from, VertexId to, double cost) {
    check_vertex(from);
    check_vertex(to);
    if (from == to) throw std::invalid_argument("self loop rejected");
    if (!(cost > 0.0)) throw std::invalid_argument("edge cost must be > 0");
    auto& adj = adjacency_[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const OutEdge& e, VertexId v) { return e.to < v; });
    if (it != adj.end() && it->to == to)
      throw std::invalid_argument("duplicate directed edge rejected");
    adj.insert(it, OutEdge{to, cost});
    ++edge_count_;
  }

  // Symmetric pair of directed edges with equal cost.
  void add_edge_sym(VertexId a, VertexId b, double cost) {
    add_edge(a, b, cost);
    add_edge(b, a, cost);
  }

  bool has_edge(VertexId from, VertexId to) const {
    return edge_cost(from, to) >= 0.0;
  }

  // Returns the edge cost or -1 when absent.
  double edge_cost(VertexId from, VertexId to) const {
    check_vertex(from);
    const auto& adj = adjacency_[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const OutEdge& e, VertexId v) { return e.to < v; });
    if (it == adj.end() || it->to != to) return -1.0;
    return it->cost;
  }

  void remove_edge(VertexId from, VertexId to) {
    check_vertex(from);
    auto& adj = adjacency_[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const OutEdge& e, VertexId v) { return e.to < v; });
    if (it == adj.end() || it->to != to) return;
    adj.erase(it);
    --edge_count_;
  }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edge_count_; }

  const Vertex& vertex(VertexId v) const {
    check_vertex(v);
    return vertices_[v];
  }

  const std::vector<OutEdge>& out_edges(VertexId v) const {
    check_vertex(v);
    return adjacency_[v];
  }

  double gain(VertexId v) const { return vertex(v).gain; }
  void set_gain(VertexId v, double g) {
    check_vertex(v);
    if (g < 0.0) throw std::invalid_argument("vertex gain must be >= 0");
    vertices_[v].gain = g;
  }

  bool is_frontier(VertexId v) const { return vertex(v).frontier; }
  void set_frontier(VertexId v, bool f) {
    check_vertex(v);
    vertices_[v].frontier = f;
  }

  Vec2 position(VertexId v) const { return vertex(v).position; }

 private:
  void check_vertex(VertexId v) const {
    if (v >= vertices_.size()) throw std::out_of_range("vertex id out of range");
  }

  std::vector<Vertex> vertices_;
  std::vector<std::vector<OutEdge>> adjacency_;
  std::size_t edge_count_ = 0;
};

// Vertex sequence with cached cost and set-based gain. Gain counts every
// distinct vertex once; cost counts every edge traversal.
class Path {
 public:
  explicit Path(const PlanGraph& graph, VertexId start)
      : graph_(&graph), vertices_{start}, gain_(graph.gain(start)) {}

  static Path from_sequence(const PlanGraph& graph,
                            const std::vector<VertexId>& seq) {
    if (seq.empty()) throw std::invalid_argument("empty vertex sequence");
    Path p(graph, seq.front());
    for (std::size_t i = 1; i < seq.size(); ++i) p = p.extend(seq[i]);
    return p;
  }

  // Path concatenation with one edge; incrementally updates the caches.
  Path extend(VertexId to) const {
    double c = graph_->edge_cost(vertices_.back(), to);
    if (c < 0.0) throw std::invalid_argument("extend: edge does not exist");
    Path out(*this);
    out.vertices_.push_back(to);
    out.cost_ += c;
    if (!contains(to)) out.gain_ += graph_->gain(to);
    return out;
  }

  const std::vector<VertexId>& vertices() const { return vertices_; }
  VertexId front() const { return vertices_.front(); }
  VertexId back() const { return vertices_.back(); }
  std::size_t length() const { return vertices_.size() - 1; }  // edge count

  double cost() const { return cost_; }
  double gain() const { return gain_; }

  // Ratio of the bare start path: +inf when it carries gain, else 0.
  double ratio() const {
    if (cost_ > 0.0) return gain_ / cost_;
    return gain_ > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }

  bool contains(VertexId v) const {
    return std::find(vertices_.begin(), vertices_.end(), v) != vertices_.end();
  }

  bool traversed(VertexId from, VertexId to) const {
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
      if (vertices_[i] == from && vertices_[i + 1] == to) return true;
    return false;
  }

  // Distinct directed edges of the sequence.
  std::vector<std::pair<VertexId, VertexId>> traversed_edges() const {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
      edges.emplace_back(vertices_[i], vertices_[i + 1]);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
  }

  const PlanGraph& graph() const { return *graph_; }

 private:
  const PlanGraph* graph_;
  std::vector<VertexId> vertices_;
  double cost_ = 0.0;
  double gain_ = 0.0;
};

inline double path_cost(const Path& p) { return p.cost(); }
inline double path_gain(const Path& p) { return p.gain(); }

enum class Preference { First, Second, Equivalent };

// Lexicographic preference: higher ratio, then higher gain, then lower cost.
inline Preference compare_preference(const Path& p1, const Path& p2) {
  double r1 = p1.ratio(), r2 = p2.ratio();
  if (r1 > r2) return Preference::First;
  if (r2 > r1) return Preference::Second;
  if (p1.gain() > p2.gain()) return Preference::First;
  if (p2.gain() > p1.gain()) return Preference::Second;
  if (p1.cost() < p2.cost()) return Preference::First;
  if (p2.cost() < p1.cost()) return Preference::Second;
  return Preference::Equivalent;
}

inline bool preferred(const Path& p1, const Path& p2) {
  return compare_preference(p1, p2) == Preference::First;
}

// --- JSON serialization -----------------------------------------------------
// {vertices:[{id,x,y,yaw,gain,frontier}], edges:[{from,to,cost}]}

inline nlohmann::json to_json(const PlanGraph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  j["edges"] = nlohmann::json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto& vx = g.vertex(v);
    j["vertices"].push_back({{"id", v},
                             {"x", vx.position.x},
                             {"y", vx.position.y},
                             {"yaw", vx.yaw_index},
                             {"gain", vx.gain},
                             {"frontier", vx.frontier}});
    for (const auto& e : g.out_edges(v))
      j["edges"].push_back({{"from", v}, {"to", e.to}, {"cost", e.cost}});
  }
  return j;
}

inline PlanGraph graph_from_json(const nlohmann::json& j) {
  PlanGraph g;
  for (const auto& v : j.at("vertices")) {
    VertexId id = g.add_vertex(Vec2{v.at("x").get<double>(), v.at("y").get<double>()},
                               v.at("gain").get<double>(), v.at("yaw").get<int>(),
                               v.at("frontier").get<bool>());
    if (id != v.at("id").get<VertexId>())
      throw std::invalid_argument("graph json: vertex ids must be dense and ordered");
  }
  for (const auto& e : j.at("edges"))
    g.add_edge(e.at("from").get<VertexId>(), e.at("to").get<VertexId>(),
               e.at("cost").get<double>());
  return g;
}

inline void save_graph(const PlanGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << to_json(g).dump(2) << "\n";
}

inline PlanGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return graph_from_json(j);
}

}  // namespace ipp
