#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "seiscurate/section.hpp"
#include "test_util.hpp"

using namespace seiscurate;
using namespace seiscurate::section;

namespace {

// Depth-axis volume whose amplitude is a chosen function of (il, xl).
SeismicVolume field_volume(std::size_t n_il, std::size_t n_xl, std::size_t n_z,
                           double (*f)(double, double)) {
  auto v = testutil::make_volume(n_il, n_xl, n_z);
  v.axis = Axis::depth;
  v.sample_interval = 10.0;
  v.geometry.origin_x = 0.0;
  v.geometry.origin_y = 0.0;
  v.geometry.il_dx = 0.0;
  v.geometry.il_dy = 100.0; // inline index -> north
  v.geometry.xl_dx = 100.0; // crossline index -> east
  v.geometry.xl_dy = 0.0;
  for (std::size_t i = 0; i < n_il; ++i)
    for (std::size_t j = 0; j < n_xl; ++j) {
      const double a = f(static_cast<double>(i), static_cast<double>(j));
      for (auto& s : v.trace(i, j)) s = a;
    }
  return v;
}

double total_path_length(const std::vector<Point>& pts,
                         const std::vector<std::size_t>& order) {
  double len = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i)
    len += std::hypot(pts[order[i]].x - pts[order[i - 1]].x,
                      pts[order[i]].y - pts[order[i - 1]].y);
  return len;
}

} // namespace

TEST_CASE("order_wells chains collinear wells in spatial order") {
  const std::vector<Point> wells{{0, 0}, {10, 0}, {5, 0}};
  const auto result = order_wells(wells);
  CHECK(result.order == std::vector<std::size_t>{0, 2, 1});
  CHECK(result.coincident.empty());

  // Exhaustive shortest-path oracle over all 3! orders.
  std::vector<std::size_t> perm{0, 1, 2};
  double best = 1e300;
  do {
    best = std::min(best, total_path_length(wells, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(total_path_length(wells, result.order) == doctest::Approx(best));
}

TEST_CASE("order_wells starts from the west-most well") {
  const std::vector<Point> wells{{100, 5}, {0, 9}};
  const auto result = order_wells(wells);
  CHECK(result.order == std::vector<std::size_t>{1, 0});
}

TEST_CASE("order_wells deduplicates coincident wells with a warning") {
  const std::vector<Point> wells{{0, 0}, {10, 0}, {0, 0}};
  const auto result = order_wells(wells);
  CHECK(result.order == std::vector<std::size_t>{0, 1});
  REQUIRE(result.coincident.size() == 1);
  CHECK(result.coincident[0] == 2);

  CHECK_THROWS_AS(order_wells(std::vector<Point>{{0, 0}, {0, 0}}),
                  ValidationError);
}

TEST_CASE("extract along a grid row reproduces the inline field") {
  const auto volume =
      field_volume(6, 8, 10, [](double il, double) { return il; });
  // A line along crossline direction at inline index 3: y = 300.
  const auto line = make_line(std::vector<Point>{{0.0, 300.0}, {700.0, 300.0}},
                              std::vector<std::string>{"A", "B"});
  ExtractOptions opts;
  opts.lateral_step = 50.0;
  const auto sec = extract_section(volume, line, opts);
  REQUIRE(sec.n_lateral == 15); // 700 / 50 closed + endpoint
  for (std::size_t l = 0; l < sec.n_lateral; ++l)
    for (std::size_t d = 0; d < sec.n_depth; ++d)
      CHECK(sec.at(l, d) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("bilinear interpolation reproduces a bilinear field on a diagonal") {
  const auto volume =
      field_volume(8, 8, 4, [](double il, double xl) { return il + xl; });
  const auto line = make_line(std::vector<Point>{{0.0, 0.0}, {700.0, 700.0}},
                              std::vector<std::string>{"A", "B"});
  ExtractOptions opts;
  opts.lateral_step = 37.0;
  const auto sec = extract_section(volume, line, opts);
  for (std::size_t l = 0; l < sec.n_lateral; ++l) {
    const Point p = sec.sample_xy[l];
    const double expected = p.y / 100.0 + p.x / 100.0; // il + xl
    CHECK(sec.at(l, 0) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("lateral_step equal to the segment length lands on the vertices") {
  const auto volume =
      field_volume(4, 4, 3, [](double il, double xl) { return 10 * il + xl; });
  const auto line = make_line(std::vector<Point>{{100.0, 100.0}, {300.0, 100.0}},
                              std::vector<std::string>{"A", "B"});
  ExtractOptions opts;
  opts.lateral_step = 200.0;
  const auto sec = extract_section(volume, line, opts);
  REQUIRE(sec.n_lateral == 2);
  CHECK(sec.at(0, 0) == doctest::Approx(10 * 1 + 1).epsilon(1e-12));
  CHECK(sec.at(1, 0) == doctest::Approx(10 * 1 + 3).epsilon(1e-12));
  REQUIRE(sec.well_ticks.size() == 2);
  CHECK(sec.well_ticks[0].lateral_index == 0);
  CHECK(sec.well_ticks[1].lateral_index == 1);
}

TEST_CASE("property: lateral spacing is uniform except the final partial step") {
  std::mt19937 rng(97);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> verts;
    double x = 50.0, y = 50.0;
    const int n = std::uniform_int_distribution<int>(2, 5)(rng);
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
      verts.push_back({x, y});
      ids.push_back("W" + std::to_string(i));
      x += std::uniform_real_distribution<double>(20.0, 120.0)(rng);
      y += std::uniform_real_distribution<double>(-60.0, 60.0)(rng);
    }
    QuasiLine line;
    try {
      line = make_line(verts, ids);
    } catch (const ValidationError&) {
      continue;
    }
    const double step = std::uniform_real_distribution<double>(5.0, 40.0)(rng);
    const auto volume = field_volume(12, 12, 3, [](double, double) { return 1.0; });
    ExtractOptions opts;
    opts.lateral_step = step;
    const auto sec = extract_section(volume, line, opts);
    for (std::size_t l = 1; l + 1 < sec.n_lateral; ++l) {
      const double spacing = std::hypot(sec.sample_xy[l].x - sec.sample_xy[l - 1].x,
                                        sec.sample_xy[l].y - sec.sample_xy[l - 1].y);
      // Straight-segment spacing equals the step except across vertices,
      // where the polyline bends and the chord shortens.
      CHECK(spacing <= step + 1e-9);
    }
    // Well ticks stay within half a step of their well (plus bend slack).
    for (const auto& tick : sec.well_ticks) {
      const auto it = std::find(ids.begin(), ids.end(), tick.well_id);
      REQUIRE(it != ids.end());
      const Point w = verts[static_cast<std::size_t>(it - ids.begin())];
      const Point t = sec.sample_xy[tick.lateral_index];
      CHECK(std::hypot(w.x - t.x, w.y - t.y) <= step / 2.0 + 1e-6);
    }
  }
}

TEST_CASE("fixed window zero-fills past the line end and counts clipping") {
  const auto volume = field_volume(6, 6, 4, [](double, double) { return 7.0; });
  const auto line = make_line(std::vector<Point>{{100.0, 100.0}, {300.0, 100.0}},
                              std::vector<std::string>{"A", "B"});
  ExtractOptions opts;
  opts.lateral_step = 50.0;
  opts.window_length = 500.0; // longer than the 200 m line
  opts.n_depth = 10;          // deeper than the 4-sample volume
  const auto sec = extract_section(volume, line, opts);
  REQUIRE(sec.n_lateral == 10);
  REQUIRE(sec.n_depth == 10);
  CHECK(sec.clipped_samples == 5); // arcs 250..450 lie past the line end
  CHECK(sec.at(0, 0) == doctest::Approx(7.0));
  CHECK(sec.at(0, 4) == 0.0); // depth padding
  CHECK(sec.at(9, 0) == 0.0); // lateral padding
}

TEST_CASE("section samples outside the volume footprint are clipped") {
  const auto volume = field_volume(4, 4, 3, [](double, double) { return 1.0; });
  // Line that runs off the eastern edge of the 300 m grid.
  const auto line = make_line(std::vector<Point>{{200.0, 150.0}, {600.0, 150.0}},
                              std::vector<std::string>{"A", "B"});
  ExtractOptions opts;
  opts.lateral_step = 50.0;
  const auto sec = extract_section(volume, line, opts);
  CHECK(sec.clipped_samples > 0);
}

TEST_CASE("make_line rejects degenerate input") {
  CHECK_THROWS_AS(make_line(std::vector<Point>{{0, 0}},
                            std::vector<std::string>{"A"}),
                  ValidationError);
  // Coincident consecutive vertices collapse; a single survivor is an error.
  CHECK_THROWS_AS(make_line(std::vector<Point>{{0, 0}, {0, 0}},
                            std::vector<std::string>{"A", "B"}),
                  ValidationError);
}
