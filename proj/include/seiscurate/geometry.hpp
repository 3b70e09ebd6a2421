#ifndef SEISCURATE_GEOMETRY_HPP
#define SEISCURATE_GEOMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "seiscurate/volume.hpp"

namespace seiscurate::geom {

// Boolean trace-presence map over the inline/crossline index box.
struct OccupancyGrid {
  int inline_min = 0;
  int crossline_min = 0;
  std::size_t n_inline = 0;
  std::size_t n_crossline = 0;
  std::vector<std::uint8_t> occupied; // [n_inline * n_crossline]

  bool at(std::size_t i, std::size_t j) const {
    return occupied[i * n_crossline + j] != 0;
  }
  void set(std::size_t i, std::size_t j) { occupied[i * n_crossline + j] = 1; }
};

// Axis-aligned rectangle in survey inline/crossline numbering, inclusive.
struct RectRegion {
  int inline_min = 0;
  int inline_max = 0;
  int crossline_min = 0;
  int crossline_max = 0;

  std::size_t n_inline() const {
    return static_cast<std::size_t>(inline_max - inline_min + 1);
  }
  std::size_t n_crossline() const {
    return static_cast<std::size_t>(crossline_max - crossline_min + 1);
  }
  std::size_t area() const { return n_inline() * n_crossline(); }
};

// Survey boundary estimated from trace positions.
struct Footprint {
  std::vector<Point> hull_polygon; // simple polygon, not closed
  int concavity_parameter = 0;     // k actually used
  bool convex_fallback = false;
};

// 2D affine transform: [x' y']^T = M [x y]^T + t.
struct Affine2D {
  double m00 = 1.0, m01 = 0.0;
  double m10 = 0.0, m11 = 1.0;
  double tx = 0.0, ty = 0.0;

  double det() const { return m00 * m11 - m01 * m10; }
  Point apply(Point p) const {
    return {m00 * p.x + m01 * p.y + tx, m10 * p.x + m11 * p.y + ty};
  }
};

struct WellLocation {
  double frac_inline = 0.0;
  double frac_crossline = 0.0;
  bool inside = false;
  // Distance in meters to the rectangle footprint polygon: positive
  // outside, negative inside (distance to the nearest edge).
  double signed_distance_m = 0.0;
};

// k-nearest-neighbor concave hull with automatic k escalation; falls
// back to the convex hull when escalation is exhausted. Requires at
// least 3 distinct, non-collinear points.
Footprint concave_hull(const std::vector<Point>& points, int k);

// Convex hull (monotone chain), counter-clockwise without repetition.
std::vector<Point> convex_hull(std::vector<Point> points);

// Largest axis-aligned rectangle of occupied cells, histogram-stack
// sweep in O(rows * cols). Ties: larger area, then larger inline extent,
// then smaller inline_min, then smaller crossline_min.
RectRegion largest_full_rectangle(const OccupancyGrid& grid);

// Inverse-affine placement of a well inside a grid of n_il x n_xl traces.
WellLocation locate_well(double x, double y, const GridGeometry& geometry,
                         std::size_t n_il, std::size_t n_xl);

std::vector<Point> apply_crs(const std::vector<Point>& points,
                             const Affine2D& transform);

// Shoelace area, positive for counter-clockwise rings.
double polygon_area(const std::vector<Point>& polygon);

// Boundary points count as inside.
bool point_in_polygon(Point p, const std::vector<Point>& polygon);

// Distance from a point to a polygon boundary (meters, >= 0).
double polygon_boundary_distance(Point p, const std::vector<Point>& polygon);

// PGM-style (P2, maxval 1) text dump for debugging.
std::string occupancy_to_pgm(const OccupancyGrid& grid);

OccupancyGrid occupancy_from_positions(const std::vector<int>& inlines,
                                       const std::vector<int>& crosslines);

} // namespace seiscurate::geom

#endif
