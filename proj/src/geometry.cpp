#include "seiscurate/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace seiscurate::geom {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist2(Point a, Point b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double segment_distance(Point p, Point a, Point b) {
  const double len2 = dist2(a, b);
  if (len2 == 0.0) return std::sqrt(dist2(p, a));
  double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const Point proj{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  return std::sqrt(dist2(p, proj));
}

// Proper or touching intersection of segments (a,b) and (c,d), ignoring
// shared endpoints.
bool segments_intersect(Point a, Point b, Point c, Point d) {
  auto near = [](Point p, Point q) { return dist2(p, q) < 1e-18; };
  if (near(a, c) || near(a, d) || near(b, c) || near(b, d)) return false;
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_segment = [&](Point p, Point q, Point r) {
    return std::min(p.x, q.x) - 1e-12 <= r.x && r.x <= std::max(p.x, q.x) + 1e-12 &&
           std::min(p.y, q.y) - 1e-12 <= r.y && r.y <= std::max(p.y, q.y) + 1e-12;
  };
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

std::vector<Point> dedupe(const std::vector<Point>& points) {
  std::vector<Point> out;
  std::set<std::pair<double, double>> seen;
  for (const auto& p : points)
    if (seen.emplace(p.x, p.y).second) out.push_back(p);
  return out;
}

bool all_collinear(const std::vector<Point>& pts) {
  if (pts.size() < 3) return true;
  for (std::size_t i = 2; i < pts.size(); ++i)
    if (std::abs(cross(pts[0], pts[1], pts[i])) > 1e-9) return false;
  return true;
}

// Attempt one k-nearest-neighbor boundary walk; empty result means the
// caller should escalate k. Counter-clockwise walk: at each vertex the
// candidates are swept counter-clockwise starting from the reverse of
// the incoming edge, and the first one whose edge does not cross the
// polyline wins. That keeps the interior on the left and hugs the
// boundary as tightly as the k-neighborhood allows.
std::vector<Point> knn_hull_walk(const std::vector<Point>& pts, int k) {
  const std::size_t n = pts.size();
  const std::size_t start = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (pts[i].y < pts[best].y ||
          (pts[i].y == pts[best].y && pts[i].x < pts[best].x))
        best = i;
    return best;
  }();

  std::vector<bool> used(n, false);
  std::vector<Point> hull;
  hull.push_back(pts[start]);
  used[start] = true;

  Point current = pts[start];
  Point previous{current.x - 1.0, current.y}; // fictitious, due west
  std::vector<std::size_t> candidates;

  for (std::size_t step = 0; step < 4 * n + 8; ++step) {
    // First point becomes a legal target again after three steps.
    if (hull.size() >= 4) used[start] = false;

    candidates.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i]) candidates.push_back(i);
    if (candidates.empty()) return {};
    std::partial_sort(candidates.begin(),
                      candidates.begin() +
                          std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(k)),
                      candidates.end(), [&](std::size_t a, std::size_t b) {
                        const double da = dist2(current, pts[a]);
                        const double db = dist2(current, pts[b]);
                        if (da != db) return da < db;
                        return a < b;
                      });
    candidates.resize(std::min<std::size_t>(candidates.size(),
                                            static_cast<std::size_t>(k)));

    const double back =
        std::atan2(previous.y - current.y, previous.x - current.x);
    auto ccw_from_back = [&](std::size_t i) {
      const double theta =
          std::atan2(pts[i].y - current.y, pts[i].x - current.x);
      double d = theta - back;
      while (d <= 1e-12) d += 2 * M_PI; // doubling back is the last resort
      while (d > 2 * M_PI) d -= 2 * M_PI;
      return d;
    };
    std::sort(candidates.begin(), candidates.end(),
              [&](std::size_t a, std::size_t b) {
                const double ca = ccw_from_back(a), cb = ccw_from_back(b);
                if (ca != cb) return ca < cb;
                return a < b;
              });

    std::size_t chosen = n;
    for (std::size_t c : candidates) {
      bool hits = false;
      // The edge arriving at `current` always shares an endpoint and is
      // skipped by the endpoint test inside segments_intersect.
      for (std::size_t e = 0; e + 2 < hull.size(); ++e) {
        if (segments_intersect(current, pts[c], hull[e], hull[e + 1])) {
          hits = true;
          break;
        }
      }
      if (!hits) {
        chosen = c;
        break;
      }
    }
    if (chosen == n) return {}; // every candidate crosses the boundary

    if (chosen == start) {
      if (hull.size() < 3) return {};
      return hull; // closed
    }
    previous = current;
    current = pts[chosen];
    used[chosen] = true;
    hull.push_back(current);
  }
  return {};
}

bool contains_all(const std::vector<Point>& polygon,
                  const std::vector<Point>& pts) {
  for (const auto& p : pts)
    if (!point_in_polygon(p, polygon)) return false;
  return true;
}

struct RectCandidate {
  std::size_t area = 0;
  std::size_t inline_extent = 0;
  int inline_min = 0;
  int crossline_min = 0;
  int crossline_max = 0;

  bool better_than(const RectCandidate& o) const {
    if (area != o.area) return area > o.area;
    if (inline_extent != o.inline_extent) return inline_extent > o.inline_extent;
    if (inline_min != o.inline_min) return inline_min < o.inline_min;
    return crossline_min < o.crossline_min;
  }
};

} // namespace

std::vector<Point> convex_hull(std::vector<Point> points) {
  points = dedupe(points);
  std::sort(points.begin(), points.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  const std::size_t n = points.size();
  if (n < 3) return points;
  std::vector<Point> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

Footprint concave_hull(const std::vector<Point>& points, int k) {
  const std::vector<Point> pts = dedupe(points);
  if (pts.size() < 3)
    throw ValidationError("concave hull needs at least 3 distinct points");
  if (all_collinear(pts))
    throw ValidationError("points are collinear: hull polygon is degenerate");
  if (k < 3) k = 3;

  Footprint fp;
  if (pts.size() == 3) {
    fp.hull_polygon = pts;
    fp.concavity_parameter = k;
    return fp;
  }
  for (int kk = std::min<int>(k, static_cast<int>(pts.size()) - 1);
       kk < static_cast<int>(pts.size()); ++kk) {
    auto hull = knn_hull_walk(pts, kk);
    if (!hull.empty() && contains_all(hull, pts)) {
      fp.hull_polygon = std::move(hull);
      fp.concavity_parameter = kk;
      return fp;
    }
  }
  fp.hull_polygon = convex_hull(pts);
  fp.concavity_parameter = static_cast<int>(pts.size());
  fp.convex_fallback = true;
  return fp;
}

RectRegion largest_full_rectangle(const OccupancyGrid& grid) {
  if (grid.n_inline == 0 || grid.n_crossline == 0)
    throw ValidationError("occupancy grid is empty");

  const std::size_t rows = grid.n_inline;
  const std::size_t cols = grid.n_crossline;
  std::vector<std::size_t> heights(cols, 0);
  RectCandidate best;

  std::vector<std::pair<std::size_t, std::size_t>> stack; // (col, height)
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c)
      heights[c] = grid.at(r, c) ? heights[c] + 1 : 0;

    stack.clear();
    for (std::size_t c = 0; c <= cols; ++c) {
      const std::size_t h = c < cols ? heights[c] : 0;
      std::size_t left = c;
      while (!stack.empty() && stack.back().second >= h) {
        const auto [start_col, height] = stack.back();
        stack.pop_back();
        if (height == 0) { left = start_col; continue; }
        RectCandidate cand;
        cand.area = height * (c - start_col);
        cand.inline_extent = height;
        cand.inline_min =
            grid.inline_min + static_cast<int>(r - height + 1);
        cand.crossline_min = grid.crossline_min + static_cast<int>(start_col);
        cand.crossline_max = grid.crossline_min + static_cast<int>(c) - 1;
        if (cand.better_than(best)) best = cand;
        left = start_col;
      }
      stack.emplace_back(left, h);
    }
  }
  if (best.area == 0)
    throw ValidationError("no occupied cell in grid: empty region");

  RectRegion rect;
  rect.inline_min = best.inline_min;
  rect.inline_max = best.inline_min + static_cast<int>(best.inline_extent) - 1;
  rect.crossline_min = best.crossline_min;
  rect.crossline_max = best.crossline_max;
  return rect;
}

WellLocation locate_well(double x, double y, const GridGeometry& geometry,
                         std::size_t n_il, std::size_t n_xl) {
  WellLocation loc;
  geometry.locate(x, y, loc.frac_inline, loc.frac_crossline);
  loc.inside = loc.frac_inline >= 0.0 &&
               loc.frac_inline <= static_cast<double>(n_il - 1) &&
               loc.frac_crossline >= 0.0 &&
               loc.frac_crossline <= static_cast<double>(n_xl - 1);

  std::vector<Point> corners(4);
  geometry.xy_at(0.0, 0.0, corners[0].x, corners[0].y);
  geometry.xy_at(static_cast<double>(n_il - 1), 0.0, corners[1].x, corners[1].y);
  geometry.xy_at(static_cast<double>(n_il - 1), static_cast<double>(n_xl - 1),
                 corners[2].x, corners[2].y);
  geometry.xy_at(0.0, static_cast<double>(n_xl - 1), corners[3].x, corners[3].y);
  const double boundary = polygon_boundary_distance({x, y}, corners);
  loc.signed_distance_m = loc.inside ? -boundary : boundary;
  return loc;
}

std::vector<Point> apply_crs(const std::vector<Point>& points,
                             const Affine2D& transform) {
  if (std::abs(transform.det()) < 1e-15)
    throw ValidationError("CRS transform is not invertible");
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(transform.apply(p));
  return out;
}

double polygon_area(const std::vector<Point>& polygon) {
  double a = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return a / 2.0;
}

bool point_in_polygon(Point p, const std::vector<Point>& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  // On-boundary counts as inside.
  for (std::size_t i = 0; i < n; ++i)
    if (segment_distance(p, polygon[i], polygon[(i + 1) % n]) < 1e-9)
      return true;
  bool in = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = polygon[i];
    const Point& b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y) &&
        p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      in = !in;
  }
  return in;
}

double polygon_boundary_distance(Point p, const std::vector<Point>& polygon) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, segment_distance(p, polygon[i], polygon[(i + 1) % n]));
  return best;
}

std::string occupancy_to_pgm(const OccupancyGrid& grid) {
  std::ostringstream os;
  os << "P2\n# inline_min=" << grid.inline_min
     << " crossline_min=" << grid.crossline_min << "\n"
     << grid.n_crossline << " " << grid.n_inline << "\n1\n";
  for (std::size_t i = 0; i < grid.n_inline; ++i) {
    for (std::size_t j = 0; j < grid.n_crossline; ++j)
      os << (grid.at(i, j) ? 1 : 0) << (j + 1 < grid.n_crossline ? " " : "");
    os << "\n";
  }
  return os.str();
}

OccupancyGrid occupancy_from_positions(const std::vector<int>& inlines,
                                       const std::vector<int>& crosslines) {
  if (inlines.empty() || inlines.size() != crosslines.size())
    throw ValidationError("occupancy needs matching nonempty inline/crossline lists");
  OccupancyGrid grid;
  grid.inline_min = *std::min_element(inlines.begin(), inlines.end());
  grid.crossline_min = *std::min_element(crosslines.begin(), crosslines.end());
  const int il_max = *std::max_element(inlines.begin(), inlines.end());
  const int xl_max = *std::max_element(crosslines.begin(), crosslines.end());
  grid.n_inline = static_cast<std::size_t>(il_max - grid.inline_min + 1);
  grid.n_crossline = static_cast<std::size_t>(xl_max - grid.crossline_min + 1);
  grid.occupied.assign(grid.n_inline * grid.n_crossline, 0);
  for (std::size_t t = 0; t < inlines.size(); ++t)
    grid.set(static_cast<std::size_t>(inlines[t] - grid.inline_min),
             static_cast<std::size_t>(crosslines[t] - grid.crossline_min));
  return grid;
}

} // namespace seiscurate::geom
