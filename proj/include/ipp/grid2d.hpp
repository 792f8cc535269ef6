#pragma once

// 2D occupancy grid at fixed resolution, exact Euclidean distance
// transform, clearance queries for a disc robot, and ray casting.

#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipp/core.hpp"

namespace ipp {

enum class Cell : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int nx, int ny, double resolution, Cell fill = Cell::Unknown)
      : nx_(nx), ny_(ny), res_(resolution),
        cells_(static_cast<std::size_t>(nx) * ny, fill) {
    if (nx < 1 || ny < 1 || !(resolution > 0.0))
      throw std::invalid_argument("invalid grid dimensions");
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double resolution() const { return res_; }
  double width() const { return nx_ * res_; }
  double height() const { return ny_ * res_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < nx_ && iy >= 0 && iy < ny_;
  }
  bool in_bounds(Vec2 p) const {
    return p.x >= 0.0 && p.x < width() && p.y >= 0.0 && p.y < height();
  }

  Cell at(int ix, int iy) const { return cells_[index(ix, iy)]; }
  void set(int ix, int iy, Cell c) { cells_[index(ix, iy)] = c; }

  Cell at(Vec2 p) const {
    if (!in_bounds(p)) throw std::out_of_range("grid query outside bounds");
    return at(cell_x(p.x), cell_y(p.y));
  }

  int cell_x(double x) const { return static_cast<int>(x / res_); }
  int cell_y(double y) const { return static_cast<int>(y / res_); }
  Vec2 center(int ix, int iy) const {
    return Vec2{(ix + 0.5) * res_, (iy + 0.5) * res_};
  }

  std::size_t count(Cell c) const {
    std::size_t n = 0;
    for (Cell x : cells_)
      if (x == c) ++n;
    return n;
  }

  const std::vector<Cell>& cells() const { return cells_; }

  std::size_t index(int ix, int iy) const {
    if (!in_bounds(ix, iy)) throw std::out_of_range("grid index outside bounds");
    return static_cast<std::size_t>(iy) * nx_ + ix;
  }

 private:
  int nx_ = 0, ny_ = 0;
  double res_ = 0.1;
  std::vector<Cell> cells_;
};

// Binary PGM dump: Occupied black, Unknown grey, Free white.
inline void save_pgm(const Grid2D& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "P5\n" << g.nx() << " " << g.ny() << "\n255\n";
  for (int iy = g.ny() - 1; iy >= 0; --iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      Cell c = g.at(ix, iy);
      char v = c == Cell::Occupied ? 0 : c == Cell::Unknown ? char(127) : char(255);
      out.put(v);
    }
}

namespace detail {

// Felzenszwalb & Huttenlocher 1D squared distance transform with argmin.
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d,
                   std::vector<int>& arg) {
  const int n = static_cast<int>(f.size());
  d.assign(n, 0.0);
  arg.assign(n, 0);
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * double(q - v[k]) + f[v[k]];
    arg[q] = v[k];
  }
}

}  // namespace detail

// Clearance field for a translating disc robot: distance from a point to
// the nearest blocked cell center (Occupied, optionally Unknown, and the
// world boundary) minus the robot radius. xi(x) > 0 <=> collision-free.
class ClearanceField {
 public:
  ClearanceField() = default;

  ClearanceField(const Grid2D& grid, double robot_radius,
                 bool unknown_blocks = true)
      : nx_(grid.nx()), ny_(grid.ny()), res_(grid.resolution()),
        width_(grid.width()), height_(grid.height()), radius_(robot_radius) {
    if (robot_radius < 0.0) throw std::invalid_argument("radius must be >= 0");
    build(grid, unknown_blocks);
  }

  double radius() const { return radius_; }
  double width() const { return width_; }
  double height() const { return height_; }
  double resolution() const { return res_; }

  // Signed clearance at an arbitrary point; points outside the bounds
  // have non-positive clearance.
  double clearance(Vec2 p) const {
    double border = std::min(std::min(p.x, width_ - p.x),
                             std::min(p.y, height_ - p.y));
    if (border <= 0.0) return border - radius_;
    double obstacle = std::numeric_limits<double>::infinity();
    int ix = std::min(static_cast<int>(p.x / res_), nx_ - 1);
    int iy = std::min(static_cast<int>(p.y / res_), ny_ - 1);
    std::int32_t nearest = nearest_[static_cast<std::size_t>(iy) * nx_ + ix];
    if (nearest >= 0) {
      int ox = nearest % nx_, oy = nearest / nx_;
      obstacle = distance(p, Vec2{(ox + 0.5) * res_, (oy + 0.5) * res_});
    }
    return std::min(border, obstacle) - radius_;
  }

  bool free(Vec2 p) const { return clearance(p) > 0.0; }

 private:
  void build(const Grid2D& grid, bool unknown_blocks) {
    // Finite sentinel: infinities break the parabola intersections in
    // the distance transform (inf - inf).
    const double kInf = 1e18;
    // Column pass.
    std::vector<double> dist_sq(static_cast<std::size_t>(nx_) * ny_);
    std::vector<std::int32_t> arg_col(dist_sq.size());
    std::vector<double> f(ny_), d;
    std::vector<int> a;
    for (int ix = 0; ix < nx_; ++ix) {
      for (int iy = 0; iy < ny_; ++iy) {
        Cell c = grid.at(ix, iy);
        bool blocked = c == Cell::Occupied ||
                       (unknown_blocks && c == Cell::Unknown);
        f[iy] = blocked ? 0.0 : kInf;
      }
      detail::edt_1d(f, d, a);
      for (int iy = 0; iy < ny_; ++iy) {
        dist_sq[static_cast<std::size_t>(iy) * nx_ + ix] = d[iy];
        arg_col[static_cast<std::size_t>(iy) * nx_ + ix] = a[iy];
      }
    }
    // Row pass.
    nearest_.assign(dist_sq.size(), -1);
    std::vector<double> fr(nx_);
    for (int iy = 0; iy < ny_; ++iy) {
      for (int ix = 0; ix < nx_; ++ix)
        fr[ix] = dist_sq[static_cast<std::size_t>(iy) * nx_ + ix];
      detail::edt_1d(fr, d, a);
      for (int ix = 0; ix < nx_; ++ix) {
        if (d[ix] >= 1e17) continue;  // no blocked cell anywhere
        int src_col = a[ix];
        int src_row = arg_col[static_cast<std::size_t>(iy) * nx_ + src_col];
        nearest_[static_cast<std::size_t>(iy) * nx_ + ix] =
            static_cast<std::int32_t>(src_row) * nx_ + src_col;
      }
    }
  }

  int nx_ = 0, ny_ = 0;
  double res_ = 0.1, width_ = 0.0, height_ = 0.0, radius_ = 0.0;
  std::vector<std::int32_t> nearest_;  // blocked cell index per cell, -1 if none
};

// Casts a ray from `origin` along `angle`, stepping at half-resolution.
// Returns the travelled distance until the first Occupied ground-truth
// cell or out-of-bounds, capped at `range`; `hit` reports an obstacle.
struct RayHit {
  double distance = 0.0;
  bool hit = false;
  int cell_x = -1, cell_y = -1;
};

inline RayHit cast_ray(const Grid2D& truth, Vec2 origin, double angle,
                       double range) {
  const double step = truth.resolution() * 0.5;
  const double dx = std::cos(angle), dy = std::sin(angle);
  RayHit out;
  for (double t = 0.0; t <= range; t += step) {
    Vec2 p{origin.x + t * dx, origin.y + t * dy};
    if (!truth.in_bounds(p)) {
      out.distance = t;
      return out;
    }
    int ix = truth.cell_x(p.x), iy = truth.cell_y(p.y);
    if (truth.at(ix, iy) == Cell::Occupied) {
      out.distance = t;
      out.hit = true;
      out.cell_x = ix;
      out.cell_y = iy;
      return out;
    }
  }
  out.distance = range;
  return out;
}

}  // namespace ipp
