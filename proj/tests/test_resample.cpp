#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "seiscurate/resample.hpp"

using namespace seiscurate;
using namespace seiscurate::resample;

namespace {

constexpr double kPi = 3.14159265358979323846;

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double power_of(const std::vector<double>& v) {
  double p = 0.0;
  for (double x : v) p += x * x;
  return p / static_cast<double>(v.size());
}

std::vector<double> sinusoid_2d(std::size_t n0, std::size_t n1, double cycles0,
                                double cycles1) {
  std::vector<double> out(n0 * n1);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      out[i * n1 + j] =
          std::cos(2.0 * kPi *
                   (cycles0 * static_cast<double>(i) / static_cast<double>(n0) +
                    cycles1 * static_cast<double>(j) / static_cast<double>(n1)));
  return out;
}

} // namespace

TEST_CASE("constant section resamples to the same constant") {
  const std::vector<double> in(512 * 1024, 3.0);
  const auto out = fft_resample_2d(in, 512, 1024, 256, 512);
  REQUIRE(out.size() == 256 * 512);
  for (double v : out) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("dc is preserved to 1e-9 relative") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  std::vector<double> in(300 * 700);
  for (auto& v : in) v = amp(rng) + 5.0;
  const auto out = fft_resample_2d(in, 300, 700, 256, 512);
  CHECK(std::abs(mean_of(out) - mean_of(in)) <= 1e-9 * std::abs(mean_of(in)));
}

TEST_CASE("in-band sinusoid survives with amplitude preserved") {
  // 10% of the target Nyquist on both axes: cycles = 0.1 * m/2 over the
  // input domain.
  const std::size_t n0 = 512, n1 = 1024, m0 = 256, m1 = 512;
  const double c0 = 0.1 * static_cast<double>(m0) / 2.0; // 12.8 -> use 13
  const double c1 = 0.1 * static_cast<double>(m1) / 2.0; // 25.6 -> use 26
  const auto in = sinusoid_2d(n0, n1, std::round(c0), std::round(c1));
  const auto out = fft_resample_2d(in, n0, n1, m0, m1);

  const auto expected = sinusoid_2d(m0, m1, std::round(c0), std::round(c1));
  double max_err = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    max_err = std::max(max_err, std::abs(out[i] - expected[i]));
  CHECK(max_err <= 1e-6);
}

TEST_CASE("above-band sinusoid is suppressed below 1e-6 of its energy") {
  const std::size_t n0 = 512, n1 = 1024, m0 = 256, m1 = 512;
  // ~1.3x the target Nyquist along axis 0 (integer cycles: one DFT bin),
  // representable in the input.
  const auto in = sinusoid_2d(n0, n1, 167.0, 0.0);
  const auto out = fft_resample_2d(in, n0, n1, m0, m1);
  const double in_power = power_of(in);
  // Non-DC output energy only.
  const double dc = mean_of(out);
  double out_power = 0.0;
  for (double v : out) out_power += (v - dc) * (v - dc);
  out_power /= static_cast<double>(out.size());
  CHECK(out_power <= 1e-6 * in_power);
}

TEST_CASE("output power never exceeds input power") {
  std::mt19937 rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n0 = std::uniform_int_distribution<std::size_t>(256, 500)(rng);
    const std::size_t n1 = std::uniform_int_distribution<std::size_t>(512, 900)(rng);
    std::vector<double> in(n0 * n1);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (auto& v : in) v = amp(rng);
    const auto out = fft_resample_2d(in, n0, n1, 256, 512);
    CHECK(power_of(out) <= power_of(in) * (1.0 + 1e-12));
  }
}

TEST_CASE("band-limited 256x512 input is a fixed point") {
  // Spectrum confined to the pass band: resampling to the same size
  // must be the identity up to roundoff.
  const std::size_t m0 = 256, m1 = 512;
  std::vector<double> in(m0 * m1, 0.0);
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (int comp = 0; comp < 8; ++comp) {
    const double c0 = std::uniform_int_distribution<int>(0, 100)(rng); // < 0.8*128
    const double c1 = std::uniform_int_distribution<int>(0, 200)(rng); // < 0.8*256
    const double a = amp(rng);
    for (std::size_t i = 0; i < m0; ++i)
      for (std::size_t j = 0; j < m1; ++j)
        in[i * m1 + j] +=
            a * std::cos(2.0 * kPi *
                         (c0 * static_cast<double>(i) / static_cast<double>(m0) +
                          c1 * static_cast<double>(j) / static_cast<double>(m1)));
  }
  const auto out = fft_resample_2d(in, m0, m1, m0, m1);
  double rms = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i)
    rms += (out[i] - in[i]) * (out[i] - in[i]);
  rms = std::sqrt(rms / static_cast<double>(in.size()));
  CHECK(rms < 1e-9);
}

TEST_CASE("upsampling bypasses the taper and interpolates") {
  // 64x64 -> 128x128: a low-frequency sinusoid must pass untouched.
  const auto in = sinusoid_2d(64, 64, 3, 5);
  const auto out = fft_resample_2d(in, 64, 64, 128, 128);
  const auto expected = sinusoid_2d(128, 128, 3, 5);
  double max_err = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    max_err = std::max(max_err, std::abs(out[i] - expected[i]));
  CHECK(max_err <= 1e-9);
}

TEST_CASE("non-finite input is rejected") {
  std::vector<double> in(16 * 16, 1.0);
  in[5] = std::nan("");
  CHECK_THROWS_WITH_AS(fft_resample_2d(in, 16, 16, 8, 8),
                       doctest::Contains("non-finite"), ValidationError);
}

TEST_CASE("taper spec validation and mask shape") {
  TaperSpec bad;
  bad.pass_fraction = 0.9;
  bad.taper_fraction = 0.2;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  TaperSpec t;
  CHECK(t.mask(0.0) == 1.0);
  CHECK(t.mask(0.8) == 1.0);
  CHECK(t.mask(0.9) == doctest::Approx(0.5).epsilon(1e-12)); // cosine midpoint
  CHECK(t.mask(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.mask(1.5) == 0.0);
  // Monotone non-increasing across the rolloff.
  for (double f = 0.0; f < 1.19; f += 0.01)
    CHECK(t.mask(f + 0.01) <= t.mask(f) + 1e-15);
}

TEST_CASE("log resampling preserves constants") {
  well::LogCurve curve;
  curve.mnemonic = "GR";
  curve.unit = "API";
  for (int i = 0; i < 4000; ++i) {
    curve.depth_m.push_back(0.5 * i + 100.0);
    curve.values.push_back(50.0);
    curve.valid.push_back(1);
  }
  const auto out = resample_log(curve, 0.0, 12.5, 256);
  std::size_t covered = 0;
  for (std::size_t m = 0; m < out.values.size(); ++m) {
    if (!out.valid[m]) continue;
    ++covered;
    CHECK(out.values[m] == doctest::Approx(50.0).epsilon(1e-9));
  }
  CHECK(covered > 100);
  CHECK_FALSE(out.valid[0]); // above the logged interval
}

TEST_CASE("log resampling preserves a linear ramp away from the edges") {
  well::LogCurve curve;
  curve.mnemonic = "DT";
  curve.unit = "US/M";
  for (int i = 0; i < 8000; ++i) {
    const double z = 0.25 * i + 50.0;
    curve.depth_m.push_back(z);
    curve.values.push_back(100.0 + 0.05 * z);
    curve.valid.push_back(1);
  }
  const auto out = resample_log(curve, 0.0, 12.5, 160);
  const double z_lo = 50.0 + 100.0, z_hi = 50.0 + 0.25 * 7999 - 100.0;
  for (std::size_t m = 0; m < out.values.size(); ++m) {
    if (!out.valid[m]) continue;
    const double z = 12.5 * static_cast<double>(m);
    if (z < z_lo || z > z_hi) continue; // taper edge zone
    const double expected = 100.0 + 0.05 * z;
    CHECK(std::abs(out.values[m] - expected) <= 0.005 * expected);
  }
}

TEST_CASE("wide null gaps stay masked, narrow ones are bridged") {
  well::LogCurve curve;
  curve.mnemonic = "RHOB";
  curve.unit = "G/C3";
  for (int i = 0; i < 4000; ++i) {
    const double z = 0.5 * i;
    curve.depth_m.push_back(z);
    const bool wide_gap = z > 700.0 && z < 800.0;  // 100 m
    const bool narrow_gap = z > 1200.0 && z < 1230.0; // 30 m
    curve.values.push_back(wide_gap || narrow_gap ? -999.25 : 2.4);
    curve.valid.push_back(wide_gap || narrow_gap ? 0 : 1);
  }
  const auto out = resample_log(curve, 0.0, 12.5, 160, {}, 50.0);
  // Inside the wide gap: masked.
  CHECK_FALSE(out.valid[60]); // 750 m
  // Inside the narrow gap: bridged.
  CHECK(out.valid[97]); // 1212.5 m
  CHECK(out.values[97] == doctest::Approx(2.4).epsilon(1e-6));
}

TEST_CASE("all-masked and too-short curves are rejected") {
  well::LogCurve curve;
  curve.mnemonic = "GR";
  for (int i = 0; i < 10; ++i) {
    curve.depth_m.push_back(i);
    curve.values.push_back(-999.25);
    curve.valid.push_back(0);
  }
  CHECK_THROWS_WITH_AS(resample_log(curve, 0.0, 12.5, 64),
                       doctest::Contains("fewer than 2 unmasked"),
                       ValidationError);
}
