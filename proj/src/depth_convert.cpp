#include "seiscurate/depth_convert.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "seiscurate/parallel.hpp"

namespace seiscurate::depth {

void TimeDepthCurve::validate() const {
  if (!(dt > 0.0)) throw ValidationError("time-depth curve dt must be > 0");
  if (z.size() != v_int.size() + 1)
    throw ValidationError("time-depth curve sample counts inconsistent");
  if (z.empty() || z.front() != 0.0)
    throw ValidationError("time-depth curve must start at z = 0 for t = 0");
  for (std::size_t k = 1; k < z.size(); ++k)
    if (!(z[k] > z[k - 1]))
      throw ValidationError("time-depth curve not strictly increasing at sample " +
                            std::to_string(k));
}

std::vector<double> interval_from_average(std::span<const double> v_avg,
                                          double dt, double v_floor,
                                          double v_ceil,
                                          std::size_t* clamp_count) {
  if (v_avg.size() < 2)
    throw ValidationError("need at least two time samples to form intervals");
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (!(v_floor > 0.0) || !(v_ceil > v_floor))
    throw ValidationError("velocity clamps must satisfy 0 < v_floor < v_ceil");

  std::size_t clamps = 0;
  std::vector<double> v_int(v_avg.size() - 1);
  for (std::size_t k = 1; k < v_avg.size(); ++k) {
    const double tk = static_cast<double>(k) * dt;
    const double tk1 = static_cast<double>(k - 1) * dt;
    const double raw = k == 1 ? v_avg[1]
                              : (v_avg[k] * tk - v_avg[k - 1] * tk1) / dt;
    const double clamped = std::clamp(raw, v_floor, v_ceil);
    if (clamped != raw) ++clamps;
    v_int[k - 1] = clamped;
  }
  if (clamp_count) *clamp_count += clamps;
  return v_int;
}

std::vector<double> depth_axis(std::span<const double> v_int, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  std::vector<double> z(v_int.size() + 1);
  z[0] = 0.0;
  for (std::size_t j = 0; j < v_int.size(); ++j) {
    if (!(v_int[j] > 0.0))
      throw ValidationError("interval velocity must be > 0");
    z[j + 1] = z[j] + v_int[j] * 0.5 * dt;
  }
  return z;
}

TimeDepthCurve make_curve(std::span<const double> v_avg, double dt,
                          double v_floor, double v_ceil,
                          std::size_t* clamp_count) {
  TimeDepthCurve curve;
  curve.dt = dt;
  curve.v_int = interval_from_average(v_avg, dt, v_floor, v_ceil, clamp_count);
  curve.z = depth_axis(curve.v_int, dt);
  curve.validate();
  return curve;
}

DepthTrace convert_trace(std::span<const double> amplitudes,
                         const TimeDepthCurve& curve, double dz, double z_max) {
  if (!(dz > 0.0)) throw ValidationError("dz must be > 0");
  if (!(z_max > 0.0)) throw ValidationError("z_max must be > 0");
  if (amplitudes.size() != curve.z.size())
    throw ValidationError("trace length does not match the time-depth curve");

  const auto n_out = static_cast<std::size_t>(std::llround(z_max / dz));
  DepthTrace out;
  out.amplitudes.assign(n_out, 0.0);
  const double z_bottom = curve.z.back();

  for (std::size_t m = 0; m < n_out; ++m) {
    const double zm = static_cast<double>(m) * dz;
    if (zm > z_bottom) break;
    // z is strictly increasing post-clamp; binary search for the segment.
    const auto it = std::upper_bound(curve.z.begin(), curve.z.end(), zm);
    std::size_t k1 = static_cast<std::size_t>(it - curve.z.begin());
    if (k1 == 0) k1 = 1;
    if (k1 >= curve.z.size()) k1 = curve.z.size() - 1;
    const std::size_t k0 = k1 - 1;
    const double seg = curve.z[k1] - curve.z[k0];
    assert(seg > 0.0);
    const double frac = (zm - curve.z[k0]) / seg;
    out.amplitudes[m] =
        amplitudes[k0] + (amplitudes[k1] - amplitudes[k0]) * frac;
    out.valid_count = m + 1;
  }
  return out;
}

SeismicVolume convert_volume(const SeismicVolume& seismic,
                             const vel::VelocityVolume& velocity,
                             const ConvertOptions& options,
                             ConvertStats* stats) {
  const SeismicVolume& vol = velocity.volume;
  if (seismic.n_inline != vol.n_inline || seismic.n_crossline != vol.n_crossline ||
      seismic.n_samples != vol.n_samples ||
      std::abs(seismic.sample_interval - vol.sample_interval) > 1e-12)
    throw ValidationError("seismic and velocity grids are not aligned");
  if (seismic.axis != Axis::time)
    throw ValidationError("convert_volume expects a time-domain volume");

  SeismicVolume out;
  out.axis = Axis::depth;
  out.n_inline = seismic.n_inline;
  out.n_crossline = seismic.n_crossline;
  out.sample_interval = options.dz;
  out.geometry = seismic.geometry;
  out.crs_tag = seismic.crs_tag;

  const std::size_t n_traces = seismic.trace_count();
  if (n_traces == 0 || seismic.n_samples == 0) {
    out.n_samples = 0;
    if (stats) stats->z_max = 0.0;
    return out;
  }
  const double dt = seismic.sample_interval;

  // Pass 1: bottom depth per trace for the automatic z_max.
  double z_max = options.z_max;
  std::vector<std::size_t> clamp_per_trace(n_traces, 0);
  if (z_max <= 0.0) {
    std::vector<double> bottoms(n_traces, 0.0);
    parallel_for(n_traces, options.threads, [&](std::size_t trace) {
      const std::size_t i = trace / seismic.n_crossline;
      const std::size_t j = trace % seismic.n_crossline;
      const auto v_int = interval_from_average(vol.trace(i, j), dt,
                                               options.v_floor, options.v_ceil);
      double z = 0.0;
      for (double v : v_int) z += v * 0.5 * dt;
      bottoms[trace] = z;
    });
    const double deepest = *std::max_element(bottoms.begin(), bottoms.end());
    z_max = std::ceil(deepest / options.dz - 1e-9) * options.dz;
  }
  const auto n_out = static_cast<std::size_t>(std::llround(z_max / options.dz));
  if (n_out == 0) throw ValidationError("z_max too small for the dz grid");

  out.n_samples = n_out;
  out.data.assign(n_traces * n_out, 0.0);
  out.valid_samples.assign(n_traces, 0);

  parallel_for(n_traces, options.threads, [&](std::size_t trace) {
    const std::size_t i = trace / seismic.n_crossline;
    const std::size_t j = trace % seismic.n_crossline;
    std::size_t clamps = 0;
    const TimeDepthCurve curve =
        make_curve(vol.trace(i, j), dt, options.v_floor, options.v_ceil, &clamps);
    const DepthTrace converted =
        convert_trace(seismic.trace(i, j), curve, options.dz, z_max);
    std::copy(converted.amplitudes.begin(), converted.amplitudes.end(),
              out.data.begin() + static_cast<std::ptrdiff_t>(trace * n_out));
    out.valid_samples[trace] = static_cast<std::uint32_t>(converted.valid_count);
    clamp_per_trace[trace] = clamps;
  });

  if (stats) {
    stats->z_max = z_max;
    for (std::size_t c : clamp_per_trace) stats->clamp_count += c;
  }
  out.validate();
  return out;
}

} // namespace seiscurate::depth
