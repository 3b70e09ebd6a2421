#include "seiscurate/section.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seiscurate::section {

namespace {

double dist(Point a, Point b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace

Point QuasiLine::point_at(double s) const {
  if (vertices.empty()) throw ValidationError("empty line");
  if (s <= 0.0) return vertices.front();
  if (s >= total_length()) return vertices.back();
  const auto it = std::upper_bound(arclength.begin(), arclength.end(), s);
  const std::size_t k1 = static_cast<std::size_t>(it - arclength.begin());
  const std::size_t k0 = k1 - 1;
  const double seg = arclength[k1] - arclength[k0];
  const double f = (s - arclength[k0]) / seg;
  return {vertices[k0].x + f * (vertices[k1].x - vertices[k0].x),
          vertices[k0].y + f * (vertices[k1].y - vertices[k0].y)};
}

void QuasiLine::validate() const {
  if (vertices.size() < 2)
    throw ValidationError("quasi-2D line needs at least 2 vertices");
  if (arclength.size() != vertices.size())
    throw ValidationError("line arclength table size mismatch");
  for (std::size_t i = 1; i < vertices.size(); ++i)
    if (!(arclength[i] > arclength[i - 1]))
      throw ValidationError("line has coincident consecutive vertices");
}

OrderResult order_wells(std::span<const Point> wells) {
  OrderResult result;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < wells.size(); ++i) {
    bool duplicate = false;
    for (std::size_t j : keep)
      if (dist(wells[i], wells[j]) < 1e-6) {
        duplicate = true;
        break;
      }
    if (duplicate) result.coincident.push_back(i);
    else keep.push_back(i);
  }
  if (keep.size() < 2)
    throw ValidationError("need at least 2 distinct wells to build a line");

  std::size_t start = keep[0];
  for (std::size_t i : keep)
    if (wells[i].x < wells[start].x ||
        (wells[i].x == wells[start].x && wells[i].y < wells[start].y))
      start = i;

  std::vector<bool> used(wells.size(), false);
  result.order.push_back(start);
  used[start] = true;
  Point current = wells[start];
  for (std::size_t step = 1; step < keep.size(); ++step) {
    std::size_t best = wells.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i : keep) {
      if (used[i]) continue;
      const double d = dist(current, wells[i]);
      if (d < best_d || (d == best_d && i < best)) {
        best_d = d;
        best = i;
      }
    }
    result.order.push_back(best);
    used[best] = true;
    current = wells[best];
  }
  return result;
}

QuasiLine make_line(std::span<const Point> wells,
                    std::span<const std::string> ids) {
  if (wells.size() != ids.size())
    throw ValidationError("well position and id lists differ in length");
  QuasiLine line;
  for (std::size_t i = 0; i < wells.size(); ++i) {
    if (!line.vertices.empty() && dist(line.vertices.back(), wells[i]) < 1e-6)
      continue; // coincident with the previous vertex
    line.vertices.push_back(wells[i]);
    line.well_ids.push_back(ids[i]);
    line.arclength.push_back(
        line.vertices.size() == 1
            ? 0.0
            : line.arclength.back() +
                  dist(line.vertices[line.vertices.size() - 2], wells[i]));
  }
  line.validate();
  return line;
}

Section extract_section(const SeismicVolume& volume, const QuasiLine& line,
                        const ExtractOptions& options) {
  line.validate();
  volume.validate();
  if (!(options.lateral_step > 0.0))
    throw ValidationError("lateral_step must be > 0");

  // Lateral sample arclengths.
  std::vector<double> arcs;
  const double step = options.lateral_step;
  if (options.window_length > 0.0) {
    const auto n = static_cast<std::size_t>(
        std::llround(options.window_length / step));
    if (n == 0) throw ValidationError("window shorter than one lateral step");
    arcs.resize(n);
    for (std::size_t i = 0; i < n; ++i) arcs[i] = static_cast<double>(i) * step;
  } else {
    const double total = line.total_length();
    for (double s = 0.0; s < total - 1e-9; s += step) arcs.push_back(s);
    arcs.push_back(total);
  }

  Section out;
  out.n_lateral = arcs.size();
  out.n_depth = options.n_depth > 0 ? options.n_depth : volume.n_samples;
  out.lateral_step = step;
  out.dz = volume.axis == Axis::depth ? volume.sample_interval : 0.0;
  out.amplitudes.assign(out.n_lateral * out.n_depth, 0.0);
  out.sample_xy.resize(out.n_lateral);

  const std::size_t n_il = volume.n_inline;
  const std::size_t n_xl = volume.n_crossline;
  const std::size_t copy_depth = std::min(out.n_depth, volume.n_samples);
  const double line_length = line.total_length();

  for (std::size_t l = 0; l < arcs.size(); ++l) {
    const Point p = line.point_at(arcs[l]);
    out.sample_xy[l] = p;
    if (arcs[l] > line_length + 1e-9) {
      ++out.clipped_samples; // window extends past the line end
      continue;
    }
    double fi, fx;
    volume.geometry.locate(p.x, p.y, fi, fx);
    if (fi < -1e-9 || fi > static_cast<double>(n_il - 1) + 1e-9 ||
        fx < -1e-9 || fx > static_cast<double>(n_xl - 1) + 1e-9) {
      ++out.clipped_samples;
      continue;
    }
    fi = std::clamp(fi, 0.0, static_cast<double>(n_il - 1));
    fx = std::clamp(fx, 0.0, static_cast<double>(n_xl - 1));
    std::size_t i0 = std::min(static_cast<std::size_t>(fi), n_il >= 2 ? n_il - 2 : 0);
    std::size_t j0 = std::min(static_cast<std::size_t>(fx), n_xl >= 2 ? n_xl - 2 : 0);
    const std::size_t i1 = std::min(i0 + 1, n_il - 1);
    const std::size_t j1 = std::min(j0 + 1, n_xl - 1);
    const double wi = fi - static_cast<double>(i0);
    const double wj = fx - static_cast<double>(j0);

    const auto t00 = volume.trace(i0, j0);
    const auto t01 = volume.trace(i0, j1);
    const auto t10 = volume.trace(i1, j0);
    const auto t11 = volume.trace(i1, j1);
    double* dst = out.amplitudes.data() + l * out.n_depth;
    for (std::size_t d = 0; d < copy_depth; ++d)
      dst[d] = (1.0 - wi) * ((1.0 - wj) * t00[d] + wj * t01[d]) +
               wi * ((1.0 - wj) * t10[d] + wj * t11[d]);
  }

  // Ticks: nearest lateral sample to each well vertex. Wells beyond the
  // sampled window carry no tick.
  for (std::size_t w = 0; w < line.well_ids.size(); ++w) {
    const double s = line.arclength[w];
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < arcs.size(); ++l) {
      const double d = std::abs(arcs[l] - s);
      if (d < best_d) {
        best_d = d;
        best = l;
      }
    }
    if (best_d <= step / 2.0 + 1e-9)
      out.well_ticks.push_back({line.well_ids[w], best});
  }
  return out;
}

} // namespace seiscurate::section
