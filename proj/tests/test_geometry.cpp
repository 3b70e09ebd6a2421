#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "seiscurate/geometry.hpp"

using namespace seiscurate;
using namespace seiscurate::geom;

namespace {

// Exhaustive O(n^4)-style oracle with 2D prefix sums: area of the
// largest all-occupied rectangle.
std::size_t brute_force_rect_area(const OccupancyGrid& grid) {
  const std::size_t rows = grid.n_inline, cols = grid.n_crossline;
  std::vector<std::size_t> prefix((rows + 1) * (cols + 1), 0);
  auto pre = [&](std::size_t r, std::size_t c) -> std::size_t& {
    return prefix[r * (cols + 1) + c];
  };
  for (std::size_t r = 1; r <= rows; ++r)
    for (std::size_t c = 1; c <= cols; ++c)
      pre(r, c) = (grid.at(r - 1, c - 1) ? 1 : 0) + pre(r - 1, c) +
                  pre(r, c - 1) - pre(r - 1, c - 1);
  std::size_t best = 0;
  for (std::size_t r0 = 0; r0 < rows; ++r0)
    for (std::size_t r1 = r0; r1 < rows; ++r1)
      for (std::size_t c0 = 0; c0 < cols; ++c0)
        for (std::size_t c1 = c0; c1 < cols; ++c1) {
          const std::size_t cells = (r1 - r0 + 1) * (c1 - c0 + 1);
          const std::size_t sum = pre(r1 + 1, c1 + 1) - pre(r0, c1 + 1) -
                                  pre(r1 + 1, c0) + pre(r0, c0);
          if (sum == cells) best = std::max(best, cells);
        }
  return best;
}

OccupancyGrid grid_from_rows(const std::vector<std::string>& rows) {
  OccupancyGrid g;
  g.n_inline = rows.size();
  g.n_crossline = rows[0].size();
  g.occupied.assign(g.n_inline * g.n_crossline, 0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      if (rows[r][c] == '1') g.set(r, c);
  return g;
}

// Independent point-to-polygon distance for the locate_well oracle.
double oracle_polygon_distance(Point p, const std::vector<Point>& poly) {
  double best = 1e300;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly[i], b = poly[(i + 1) % poly.size()];
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(p.x - a.x - t * vx, p.y - a.y - t * vy));
  }
  return best;
}

} // namespace

TEST_CASE("concave hull of a square is the square") {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto fp = concave_hull(pts, 3);
  CHECK(fp.hull_polygon.size() == 4);
  CHECK(std::abs(polygon_area(fp.hull_polygon)) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& p : pts) CHECK(point_in_polygon(p, fp.hull_polygon));
}

TEST_CASE("concave hull of an L-shape beats the convex hull") {
  // Dense grid with the upper-right quadrant removed.
  std::vector<Point> pts;
  for (int x = 0; x <= 10; ++x)
    for (int y = 0; y <= 10; ++y)
      if (!(x > 5 && y > 5)) pts.push_back({static_cast<double>(x), static_cast<double>(y)});

  const auto concave = concave_hull(pts, 3);
  const auto convex = convex_hull(pts);
  const double concave_area = std::abs(polygon_area(concave.hull_polygon));
  const double convex_area = std::abs(polygon_area(convex));
  CHECK(concave_area < convex_area);
  for (const auto& p : pts) CHECK(point_in_polygon(p, concave.hull_polygon));
}

TEST_CASE("concave hull rejects degenerate input") {
  CHECK_THROWS_AS(concave_hull({{0, 0}, {1, 1}}, 3), ValidationError);
  CHECK_THROWS_WITH_AS(concave_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, 3),
                       doctest::Contains("collinear"), ValidationError);
}

TEST_CASE("property: concave hull contains every input point") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(3, 120)(rng);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back({std::uniform_real_distribution<double>(-50, 50)(rng),
                     std::uniform_real_distribution<double>(-50, 50)(rng)});
    Footprint fp;
    try {
      fp = concave_hull(pts, std::uniform_int_distribution<int>(3, 9)(rng));
    } catch (const ValidationError&) {
      continue; // collinear draw
    }
    for (const auto& p : pts) CHECK(point_in_polygon(p, fp.hull_polygon));
  }
}

TEST_CASE("largest rectangle on the reference grid") {
  const auto grid = grid_from_rows({"1110", "1111", "1111"});
  CHECK(brute_force_rect_area(grid) == 9); // oracle agrees with the hand value
  const auto rect = largest_full_rectangle(grid);
  CHECK(rect.area() == 9);
  CHECK(rect.inline_min == 0);
  CHECK(rect.inline_max == 2);
  CHECK(rect.crossline_min == 0);
  CHECK(rect.crossline_max == 2);
}

TEST_CASE("largest rectangle of a full grid is the grid") {
  OccupancyGrid g;
  g.n_inline = 5;
  g.n_crossline = 7;
  g.occupied.assign(35, 1);
  const auto rect = largest_full_rectangle(g);
  CHECK(rect.area() == 35);
}

TEST_CASE("largest rectangle requires an occupied cell") {
  OccupancyGrid g;
  g.n_inline = 3;
  g.n_crossline = 3;
  g.occupied.assign(9, 0);
  CHECK_THROWS_WITH_AS(largest_full_rectangle(g), doctest::Contains("empty"),
                       ValidationError);
}

TEST_CASE("property: largest rectangle matches the exhaustive oracle") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    OccupancyGrid g;
    g.n_inline = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    g.n_crossline = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    g.occupied.resize(g.n_inline * g.n_crossline);
    std::bernoulli_distribution occ(std::uniform_real_distribution<double>(0.2, 0.95)(rng));
    bool any = false;
    for (auto& cell : g.occupied) {
      cell = occ(rng) ? 1 : 0;
      any = any || cell;
    }
    if (!any) {
      CHECK_THROWS_AS(largest_full_rectangle(g), ValidationError);
      continue;
    }
    const auto rect = largest_full_rectangle(g);
    CHECK(rect.area() == brute_force_rect_area(g));
    // The result must contain only occupied cells.
    for (int i = rect.inline_min; i <= rect.inline_max; ++i)
      for (int j = rect.crossline_min; j <= rect.crossline_max; ++j)
        REQUIRE(g.at(static_cast<std::size_t>(i - g.inline_min),
                     static_cast<std::size_t>(j - g.crossline_min)));
  }
}

TEST_CASE("locate_well maps meters to fractional indices") {
  GridGeometry g;
  g.origin_x = 1000.0;
  g.origin_y = 2000.0;
  g.il_dx = 0.0;
  g.il_dy = 25.0;
  g.xl_dx = 12.5;
  g.xl_dy = 0.0;

  const auto at_origin = locate_well(1000.0, 2000.0, g, 10, 20);
  CHECK(at_origin.frac_inline == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_origin.frac_crossline == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_origin.inside);
  CHECK(at_origin.signed_distance_m <= 0.0);

  const auto two_inlines = locate_well(1000.0, 2050.0, g, 10, 20);
  CHECK(two_inlines.frac_inline == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(two_inlines.frac_crossline == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(two_inlines.inside);
}

TEST_CASE("locate_well outside flag and signed distance match the oracle") {
  GridGeometry g;
  g.origin_x = 0.0;
  g.origin_y = 0.0;
  g.il_dx = 0.0;
  g.il_dy = 25.0;
  g.xl_dx = 25.0;
  g.xl_dy = 0.0;
  const std::size_t n_il = 5, n_xl = 9; // 100 m x 200 m footprint

  const std::vector<Point> corners{{0, 0}, {0, 100}, {200, 100}, {200, 0}};
  std::mt19937 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const Point p{std::uniform_real_distribution<double>(-1500, 1500)(rng),
                  std::uniform_real_distribution<double>(-1500, 1500)(rng)};
    const auto loc = locate_well(p.x, p.y, g, n_il, n_xl);
    const bool inside_expected = p.x >= 0 && p.x <= 200 && p.y >= 0 && p.y <= 100;
    CHECK(loc.inside == inside_expected);
    const double d = oracle_polygon_distance(p, corners);
    CHECK(std::abs(std::abs(loc.signed_distance_m) - d) <= 1e-9 * std::max(1.0, d));
    if (!inside_expected) CHECK(loc.signed_distance_m > 0.0);
  }

  const auto far_away = locate_well(1200.0, 50.0, g, n_il, n_xl);
  CHECK_FALSE(far_away.inside);
  CHECK(far_away.signed_distance_m == doctest::Approx(1000.0).epsilon(1e-9));
}

TEST_CASE("locate_well rejects a singular basis") {
  GridGeometry g;
  g.il_dx = 1.0;
  g.il_dy = 0.0;
  g.xl_dx = 2.0;
  g.xl_dy = 0.0; // parallel to il
  CHECK_THROWS_AS(locate_well(0.0, 0.0, g, 3, 3), ValidationError);
}

TEST_CASE("property: locate_well inverts the index-to-meters map") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    GridGeometry g;
    g.origin_x = std::uniform_real_distribution<double>(-1e5, 1e5)(rng);
    g.origin_y = std::uniform_real_distribution<double>(-1e5, 1e5)(rng);
    const double angle = std::uniform_real_distribution<double>(0, 6.28)(rng);
    const double il_len = std::uniform_real_distribution<double>(5, 50)(rng);
    const double xl_len = std::uniform_real_distribution<double>(5, 50)(rng);
    g.il_dx = il_len * std::cos(angle);
    g.il_dy = il_len * std::sin(angle);
    g.xl_dx = -xl_len * std::sin(angle);
    g.xl_dy = xl_len * std::cos(angle);

    const double fi = std::uniform_real_distribution<double>(0, 9)(rng);
    const double fx = std::uniform_real_distribution<double>(0, 9)(rng);
    double x, y;
    g.xy_at(fi, fx, x, y);
    const auto loc = locate_well(x, y, g, 10, 10);
    CHECK(std::abs(loc.frac_inline - fi) <= 1e-9);
    CHECK(std::abs(loc.frac_crossline - fx) <= 1e-9);
    CHECK(loc.inside);
  }
}

TEST_CASE("apply_crs transforms") {
  const std::vector<Point> pts{{1, 0}, {0, 1}, {3, -2}};

  SUBCASE("identity") {
    const auto out = apply_crs(pts, {});
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(out[i].x == pts[i].x);
      CHECK(out[i].y == pts[i].y);
    }
  }
  SUBCASE("translation") {
    Affine2D t;
    t.tx = 100.0;
    t.ty = -50.0;
    const auto out = apply_crs(pts, t);
    CHECK(out[0].x == 101.0);
    CHECK(out[0].y == -50.0);
  }
  SUBCASE("rotation by 90 degrees") {
    Affine2D r;
    r.m00 = 0.0;
    r.m01 = -1.0;
    r.m10 = 1.0;
    r.m11 = 0.0;
    const auto out = apply_crs(pts, r);
    CHECK(out[0].x == doctest::Approx(0.0));
    CHECK(out[0].y == doctest::Approx(1.0)); // (1,0) -> (0,1)
  }
  SUBCASE("singular transform rejected") {
    Affine2D s;
    s.m00 = 1.0;
    s.m01 = 2.0;
    s.m10 = 2.0;
    s.m11 = 4.0;
    CHECK_THROWS_AS(apply_crs(pts, s), ValidationError);
  }
}

TEST_CASE("occupancy pgm dump") {
  const auto grid = grid_from_rows({"10", "01"});
  const auto pgm = occupancy_to_pgm(grid);
  CHECK(pgm.rfind("P2", 0) == 0);
  CHECK(pgm.find("2 2") != std::string::npos);
  CHECK(pgm.find("1 0") != std::string::npos);
  CHECK(pgm.find("0 1") != std::string::npos);
}
