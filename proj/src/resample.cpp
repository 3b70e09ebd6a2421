#include "seiscurate/resample.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>

namespace seiscurate::resample {

namespace {

// FFTW plan creation is not thread safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  fftw_complex* data = nullptr;
  explicit FftwBuffer(std::size_t n) {
    data = fftw_alloc_complex(n);
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct FftwPlan {
  fftw_plan plan = nullptr;
  FftwPlan(int rank, const int* n, fftw_complex* in, fftw_complex* out,
           int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(rank, n, in, out, sign, FFTW_ESTIMATE);
    if (!plan) throw Error("FFTW plan creation failed");
  }
  ~FftwPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  void execute() const { fftw_execute(plan); }
};

// Spectral bin mapping for one axis: output bin -> weighted input bins.
struct BinSource {
  std::size_t in_index;
  double weight;
};

// Builds the per-output-bin source list for resampling an axis of
// length n to length m. Downsampling applies the taper mask in units of
// the target Nyquist and halves the output Nyquist bin symmetrically;
// upsampling bypasses the taper and splits the input Nyquist bin.
std::vector<std::vector<BinSource>> axis_mapping(std::size_t n, std::size_t m,
                                                 const TaperSpec& taper) {
  std::vector<std::vector<BinSource>> map(m);
  const auto wrap_in = [n](std::ptrdiff_t s) {
    return static_cast<std::size_t>(s >= 0 ? s : s + static_cast<std::ptrdiff_t>(n));
  };

  if (m <= n) {
    const double nyq = static_cast<double>(m) / 2.0;
    for (std::size_t j = 0; j < m; ++j) {
      const bool is_nyquist = (m % 2 == 0) && j == m / 2;
      if (is_nyquist) {
        const double w = taper.mask(1.0);
        if (n == m) {
          map[j].push_back({j, w});
        } else {
          // Input carries +m/2 and -m/2 separately; average them.
          map[j].push_back({m / 2, 0.5 * w});
          map[j].push_back({n - m / 2, 0.5 * w});
        }
        continue;
      }
      const std::ptrdiff_t s =
          j <= m / 2 ? static_cast<std::ptrdiff_t>(j)
                     : static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(m);
      const double w = nyq > 0.0 ? taper.mask(std::abs(static_cast<double>(s)) / nyq)
                                 : taper.mask(0.0);
      map[j].push_back({wrap_in(s), w});
    }
  } else {
    // Upsampling: copy every input frequency, taper bypassed.
    for (std::size_t i = 0; i < n; ++i) {
      const bool in_nyquist = (n % 2 == 0) && i == n / 2;
      if (in_nyquist) {
        map[n / 2].push_back({i, 0.5});
        map[m - n / 2].push_back({i, 0.5});
        continue;
      }
      const std::ptrdiff_t s =
          i <= n / 2 ? static_cast<std::ptrdiff_t>(i)
                     : static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(n);
      const std::size_t j =
          static_cast<std::size_t>(s >= 0 ? s : s + static_cast<std::ptrdiff_t>(m));
      map[j].push_back({i, 1.0});
    }
  }
  return map;
}

} // namespace

void TaperSpec::validate() const {
  if (pass_fraction < 0.0 || taper_fraction < 0.0)
    throw ValidationError("taper fractions must be >= 0");
  if (pass_fraction + taper_fraction > 1.0 + 1e-12)
    throw ValidationError("pass_fraction + taper_fraction must be <= 1");
}

double TaperSpec::mask(double f) const {
  if (f <= pass_fraction) return 1.0;
  if (taper_fraction <= 0.0) return 0.0;
  if (f >= pass_fraction + taper_fraction) return 0.0;
  return 0.5 * (1.0 + std::cos(M_PI * (f - pass_fraction) / taper_fraction));
}

std::vector<double> fft_resample_2d(std::span<const double> data,
                                    std::size_t n0, std::size_t n1,
                                    std::size_t m0, std::size_t m1,
                                    const TaperSpec& taper) {
  taper.validate();
  if (n0 == 0 || n1 == 0 || m0 == 0 || m1 == 0)
    throw ValidationError("resample dimensions must be >= 1");
  if (data.size() != n0 * n1)
    throw ValidationError("input size does not match dimensions");
  for (double v : data)
    if (!std::isfinite(v))
      throw ValidationError("input section contains non-finite values");

  FftwBuffer in(n0 * n1);
  for (std::size_t i = 0; i < n0 * n1; ++i) {
    in.data[i][0] = data[i];
    in.data[i][1] = 0.0;
  }
  {
    const int dims[2] = {static_cast<int>(n0), static_cast<int>(n1)};
    FftwPlan forward(2, dims, in.data, in.data, FFTW_FORWARD);
    forward.execute();
  }

  const auto map0 = axis_mapping(n0, m0, taper);
  const auto map1 = axis_mapping(n1, m1, taper);
  const double scale = static_cast<double>(m0) * static_cast<double>(m1) /
                       (static_cast<double>(n0) * static_cast<double>(n1));

  FftwBuffer out(m0 * m1);
  for (std::size_t i = 0; i < m0 * m1; ++i) out.data[i][0] = out.data[i][1] = 0.0;
  for (std::size_t j0 = 0; j0 < m0; ++j0) {
    for (const auto& s0 : map0[j0]) {
      for (std::size_t j1 = 0; j1 < m1; ++j1) {
        double re = 0.0, im = 0.0;
        for (const auto& s1 : map1[j1]) {
          const double w = s0.weight * s1.weight;
          const auto& src = in.data[s0.in_index * n1 + s1.in_index];
          re += w * src[0];
          im += w * src[1];
        }
        out.data[j0 * m1 + j1][0] += re * scale;
        out.data[j0 * m1 + j1][1] += im * scale;
      }
    }
  }

  {
    const int dims[2] = {static_cast<int>(m0), static_cast<int>(m1)};
    FftwPlan inverse(2, dims, out.data, out.data, FFTW_BACKWARD);
    inverse.execute();
  }
  std::vector<double> result(m0 * m1);
  const double norm = 1.0 / (static_cast<double>(m0) * static_cast<double>(m1));
  for (std::size_t i = 0; i < m0 * m1; ++i) result[i] = out.data[i][0] * norm;
  return result;
}

ResampledCurve resample_log(const well::LogCurve& curve, double z0, double dz,
                            std::size_t n_out, const TaperSpec& taper,
                            double gap_threshold_m) {
  taper.validate();
  if (!(dz > 0.0)) throw ValidationError("dz must be > 0");
  if (n_out == 0) throw ValidationError("n_out must be >= 1");

  std::vector<double> depth, value;
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    if (!curve.valid[i]) continue;
    if (!depth.empty() && !(curve.depth_m[i] > depth.back()))
      throw ValidationError("log depths not strictly increasing");
    depth.push_back(curve.depth_m[i]);
    value.push_back(curve.values[i]);
  }
  if (depth.size() < 2)
    throw ValidationError("curve " + curve.mnemonic +
                          " has fewer than 2 unmasked samples");

  // Fine grid sized from the data's own sampling, capped for sanity.
  std::vector<double> gaps(depth.size() - 1);
  for (std::size_t i = 0; i + 1 < depth.size(); ++i)
    gaps[i] = depth[i + 1] - depth[i];
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double median_gap = gaps[gaps.size() / 2];
  const double h = std::clamp(median_gap, dz / 256.0, dz / 4.0);
  const double span = depth.back() - depth.front();
  std::size_t n_fine = static_cast<std::size_t>(std::floor(span / h)) + 1;
  n_fine = std::clamp<std::size_t>(n_fine, 2, std::size_t{1} << 22);
  const double step = span / static_cast<double>(n_fine - 1);

  std::vector<double> fine(n_fine);
  std::vector<std::uint8_t> fine_valid(n_fine, 1);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n_fine; ++i) {
    const double z = depth.front() + static_cast<double>(i) * step;
    while (seg + 2 < depth.size() && depth[seg + 1] < z) ++seg;
    const double width = depth[seg + 1] - depth[seg];
    const double f = std::clamp((z - depth[seg]) / width, 0.0, 1.0);
    fine[i] = value[seg] + f * (value[seg + 1] - value[seg]);
    if (width > gap_threshold_m && z > depth[seg] + 1e-9 &&
        z < depth[seg + 1] - 1e-9)
      fine_valid[i] = 0; // interior of a wide data gap
  }

  // Endpoint-line detrend kills the circular wrap discontinuity.
  const double trend0 = fine.front();
  const double trend_slope =
      n_fine > 1 ? (fine.back() - fine.front()) / static_cast<double>(n_fine - 1)
                 : 0.0;
  FftwBuffer buf(n_fine);
  for (std::size_t i = 0; i < n_fine; ++i) {
    buf.data[i][0] = fine[i] - (trend0 + trend_slope * static_cast<double>(i));
    buf.data[i][1] = 0.0;
  }
  {
    const int dims[1] = {static_cast<int>(n_fine)};
    FftwPlan forward(1, dims, buf.data, buf.data, FFTW_FORWARD);
    forward.execute();
  }
  const double f_nyq_target = 1.0 / (2.0 * dz); // cycles per meter
  for (std::size_t k = 0; k < n_fine; ++k) {
    const std::ptrdiff_t s =
        k <= n_fine / 2 ? static_cast<std::ptrdiff_t>(k)
                        : static_cast<std::ptrdiff_t>(k) -
                              static_cast<std::ptrdiff_t>(n_fine);
    const double freq = std::abs(static_cast<double>(s)) /
                        (static_cast<double>(n_fine) * step);
    const double w = taper.mask(freq / f_nyq_target);
    buf.data[k][0] *= w;
    buf.data[k][1] *= w;
  }
  {
    const int dims[1] = {static_cast<int>(n_fine)};
    FftwPlan inverse(1, dims, buf.data, buf.data, FFTW_BACKWARD);
    inverse.execute();
  }
  for (std::size_t i = 0; i < n_fine; ++i)
    fine[i] = buf.data[i][0] / static_cast<double>(n_fine) +
              (trend0 + trend_slope * static_cast<double>(i));

  ResampledCurve out;
  out.mnemonic = curve.mnemonic;
  out.unit = curve.unit;
  out.values.assign(n_out, 0.0);
  out.valid.assign(n_out, 0);
  for (std::size_t m = 0; m < n_out; ++m) {
    const double z = z0 + static_cast<double>(m) * dz;
    if (z < depth.front() - 1e-9 || z > depth.back() + 1e-9) continue;
    const double pos =
        std::clamp((z - depth.front()) / step, 0.0, static_cast<double>(n_fine - 1));
    const std::size_t i0 =
        std::min(static_cast<std::size_t>(pos), n_fine - 2);
    const double f = pos - static_cast<double>(i0);
    if (!fine_valid[i0] || !fine_valid[i0 + 1]) continue; // masked gap
    out.values[m] = fine[i0] + f * (fine[i0 + 1] - fine[i0]);
    out.valid[m] = 1;
  }
  return out;
}

} // namespace seiscurate::resample
