#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "seiscurate/depth_convert.hpp"
#include "test_util.hpp"

using namespace seiscurate;
using namespace seiscurate::depth;

TEST_CASE("interval velocities from average velocities") {
  SUBCASE("constant field is the identity") {
    const std::vector<double> v_avg(10, 2000.0);
    const auto v_int = interval_from_average(v_avg, 0.004, 1400.0, 7000.0);
    REQUIRE(v_int.size() == 9);
    for (double v : v_int) CHECK(v == doctest::Approx(2000.0).epsilon(1e-12));
  }
  SUBCASE("cumulative-sum identity over one interval") {
    // v_avg(1 s) = 2000, v_avg(2 s) = 2500 with dt = 1 s:
    // v_int = (2500*2 - 2000*1) / 1 = 3000
    const std::vector<double> v_avg{0.0, 2000.0, 2500.0};
    const auto v_int = interval_from_average(v_avg, 1.0, 1400.0, 7000.0);
    REQUIRE(v_int.size() == 2);
    CHECK(v_int[0] == doctest::Approx(2000.0).epsilon(1e-12)); // first = v_avg_1
    CHECK(v_int[1] == doctest::Approx(3000.0).epsilon(1e-12));
  }
  SUBCASE("steeply decreasing average clamps to the floor and counts") {
    const std::vector<double> v_avg{0.0, 3000.0, 1600.0};
    std::size_t clamps = 0;
    const auto v_int = interval_from_average(v_avg, 1.0, 1400.0, 7000.0, &clamps);
    // raw v_int_2 = (1600*2 - 3000*1) / 1 = 200 -> clamped
    CHECK(v_int[1] == 1400.0);
    CHECK(clamps == 1);
  }
}

TEST_CASE("depth axis closed forms") {
  SUBCASE("constant 2000 m/s, dt 4 ms, 500 intervals -> 2000 m") {
    const std::vector<double> v_int(500, 2000.0);
    const auto z = depth_axis(v_int, 0.004);
    REQUIRE(z.size() == 501);
    CHECK(z[0] == 0.0);
    CHECK(z[500] == doctest::Approx(2000.0).epsilon(1e-12));
  }
  SUBCASE("two-layer closed form") {
    // 1500 m/s for the first second of TWT, 3000 m/s for the next:
    // z(2 s) = 750 + 1500 = 2250 m
    std::vector<double> v_int(200, 1500.0);
    v_int.resize(400, 3000.0);
    const auto z = depth_axis(v_int, 0.005);
    CHECK(z[200] == doctest::Approx(750.0).epsilon(1e-12));
    CHECK(z[400] == doctest::Approx(2250.0).epsilon(1e-12));
  }
  SUBCASE("no intervals -> z = {0}") {
    const auto z = depth_axis(std::vector<double>{}, 0.004);
    REQUIRE(z.size() == 1);
    CHECK(z[0] == 0.0);
  }
}

TEST_CASE("property: depth axis matches the layer-cake closed form") {
  std::mt19937 rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_layers = std::uniform_int_distribution<int>(1, 8)(rng);
    const double dt = std::uniform_real_distribution<double>(0.001, 0.008)(rng);
    std::vector<double> v_int;
    std::vector<std::pair<std::size_t, double>> layers; // (interval count, v)
    for (int l = 0; l < n_layers; ++l) {
      const auto count = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
      const double v = std::uniform_real_distribution<double>(1450.0, 6500.0)(rng);
      layers.emplace_back(count, v);
      v_int.insert(v_int.end(), count, v);
    }
    const auto z = depth_axis(v_int, dt);
    double closed = 0.0;
    std::size_t k = 0;
    for (const auto& [count, v] : layers) {
      closed += v / 2.0 * dt * static_cast<double>(count);
      k += count;
      CHECK(std::abs(z[k] - closed) <= 1e-9 * closed);
    }
    for (std::size_t i = 1; i < z.size(); ++i) REQUIRE(z[i] > z[i - 1]);
  }
}

TEST_CASE("convert_trace places a spike at v t / 2") {
  const std::size_t n = 301; // 1.2 s at 4 ms
  const double dt = 0.004;
  const std::vector<double> v_avg(n, 2500.0);
  const auto curve = make_curve(v_avg, dt, 1400.0, 7000.0);

  std::vector<double> amps(n, 0.0);
  amps[200] = 1.0; // t = 0.8 s -> z = 2500 * 0.8 / 2 = 1000 m
  const double dz = 12.5;
  const auto out = convert_trace(amps, curve, dz, 1500.0);

  std::size_t peak = 0;
  for (std::size_t m = 1; m < out.amplitudes.size(); ++m)
    if (out.amplitudes[m] > out.amplitudes[peak]) peak = m;
  CHECK(std::abs(static_cast<double>(peak) * dz - 1000.0) <= dz / 2.0);
}

TEST_CASE("convert_trace interpolates constants exactly and masks the tail") {
  const std::size_t n = 101;
  const std::vector<double> v_avg(n, 2000.0);
  const auto curve = make_curve(v_avg, 0.004, 1400.0, 7000.0);
  const std::vector<double> amps(n, 1.0);
  // Coverage: z(t_max) = 2000 * 0.4 / 2 = 400 m; ask for 600 m.
  const auto out = convert_trace(amps, curve, 10.0, 600.0);
  REQUIRE(out.amplitudes.size() == 60);
  CHECK(out.valid_count == 41); // nodes 0..400 m inclusive
  for (std::size_t m = 0; m < out.valid_count; ++m)
    CHECK(out.amplitudes[m] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t m = out.valid_count; m < out.amplitudes.size(); ++m)
    CHECK(out.amplitudes[m] == 0.0);
}

TEST_CASE("constant-velocity round trip recovers sample positions") {
  const std::size_t n = 251;
  const double dt = 0.004, v = 3000.0;
  const std::vector<double> v_avg(n, v);
  const auto curve = make_curve(v_avg, dt, 1400.0, 7000.0);

  std::vector<double> amps(n);
  for (std::size_t k = 0; k < n; ++k)
    amps[k] = std::sin(0.07 * static_cast<double>(k));
  const double dz = 6.25;
  const auto out = convert_trace(amps, curve, dz, curve.z.back());

  // Analytic inverse: t = 2 z / v. Depth-domain samples must match the
  // time-domain signal within one time sample.
  for (std::size_t m = 0; m < out.valid_count; ++m) {
    const double t = 2.0 * (static_cast<double>(m) * dz) / v;
    const double k = t / dt;
    const std::size_t k0 = std::min(static_cast<std::size_t>(k), n - 2);
    const double expected =
        amps[k0] + (amps[k0 + 1] - amps[k0]) * (k - static_cast<double>(k0));
    CHECK(std::abs(out.amplitudes[m] - expected) <= 1e-9);
  }
}

TEST_CASE("convert_volume applies the chain per trace") {
  auto seismic = testutil::make_volume(3, 4, 101);
  // One flat spike at t = 0.2 s in every trace.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) seismic.trace(i, j)[50] = 1.0;

  vel::VelocityVolume velocity;
  velocity.volume = testutil::make_volume(3, 4, 101);
  for (auto& v : velocity.volume.data) v = 2500.0;

  ConvertOptions opts;
  opts.dz = 12.5;
  ConvertStats stats;
  const auto depth_volume = convert_volume(seismic, velocity, opts, &stats);

  CHECK(depth_volume.axis == Axis::depth);
  CHECK(stats.z_max == doctest::Approx(500.0)); // 2500 * 0.4 / 2
  // Flat horizon: all traces identical, spike at z = 250 m.
  const auto t0 = depth_volume.trace(0, 0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const auto t = depth_volume.trace(i, j);
      for (std::size_t m = 0; m < t.size(); ++m) REQUIRE(t[m] == t0[m]);
    }
  std::size_t peak = 0;
  for (std::size_t m = 1; m < t0.size(); ++m)
    if (t0[m] > t0[peak]) peak = m;
  CHECK(std::abs(static_cast<double>(peak) * 12.5 - 250.0) <= 12.5 / 2.0);
}

TEST_CASE("convert_volume is deterministic across thread counts") {
  auto seismic = testutil::make_volume(4, 5, 80);
  std::mt19937 rng(89);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (auto& a : seismic.data) a = amp(rng);

  vel::VelocityVolume velocity;
  velocity.volume = testutil::make_volume(4, 5, 80);
  std::uniform_real_distribution<double> vv(1500.0, 4500.0);
  for (auto& v : velocity.volume.data) v = vv(rng);

  ConvertOptions one;
  one.threads = 1;
  ConvertOptions four;
  four.threads = 4;
  const auto a = convert_volume(seismic, velocity, one);
  const auto b = convert_volume(seismic, velocity, four);
  REQUIRE(a.data.size() == b.data.size());
  CHECK(a.data == b.data); // bit identical
  CHECK(a.valid_samples == b.valid_samples);
}

TEST_CASE("convert_volume rejects mismatched grids and wrong axis") {
  auto seismic = testutil::make_volume(3, 4, 101);
  vel::VelocityVolume velocity;
  velocity.volume = testutil::make_volume(3, 5, 101);
  for (auto& v : velocity.volume.data) v = 2000.0;
  CHECK_THROWS_WITH_AS(convert_volume(seismic, velocity, {}),
                       doctest::Contains("not aligned"), ValidationError);

  vel::VelocityVolume aligned;
  aligned.volume = testutil::make_volume(3, 4, 101);
  for (auto& v : aligned.volume.data) v = 2000.0;
  seismic.axis = Axis::depth;
  CHECK_THROWS_AS(convert_volume(seismic, aligned, {}), ValidationError);
}

TEST_CASE("zero-size volume converts to a zero-size volume") {
  SeismicVolume seismic;
  seismic.axis = Axis::time;
  seismic.sample_interval = 0.004;
  vel::VelocityVolume velocity;
  velocity.volume.sample_interval = 0.004;
  const auto out = convert_volume(seismic, velocity, {});
  CHECK(out.trace_count() == 0);
  CHECK(out.data.empty());
}
