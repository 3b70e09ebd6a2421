#ifndef SEISCURATE_RESAMPLE_HPP
#define SEISCURATE_RESAMPLE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seiscurate/errors.hpp"
#include "seiscurate/well.hpp"

namespace seiscurate::resample {

// Raised-cosine low-pass in units of the target Nyquist: 1 below
// pass_fraction, half cosine across taper_fraction, 0 above.
struct TaperSpec {
  double pass_fraction = 0.8;
  double taper_fraction = 0.2;

  void validate() const;
  double mask(double freq_fraction) const; // freq_fraction = f / f_nyq_target
};

// Spectral resampling of a real 2D array [n0][n1] to [m0][m1]:
// forward FFT, separable per-axis raised-cosine mask, spectrum
// truncation (or zero pad when upsampling, taper bypassed), inverse
// FFT. DC is preserved; the output mean equals the input mean.
std::vector<double> fft_resample_2d(std::span<const double> data,
                                    std::size_t n0, std::size_t n1,
                                    std::size_t m0, std::size_t m1,
                                    const TaperSpec& taper = {});

struct ResampledCurve {
  std::string mnemonic;
  std::string unit;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
};

// Harmonizes a log curve onto the seismic depth grid z_m = z0 + m * dz:
// gap-aware linear interpolation onto a fine grid, 1D FFT cosine-taper
// low-pass at the target Nyquist, then decimation. Null gaps wider than
// gap_threshold_m stay masked; nodes outside the logged interval are
// masked.
ResampledCurve resample_log(const well::LogCurve& curve, double z0, double dz,
                            std::size_t n_out, const TaperSpec& taper = {},
                            double gap_threshold_m = 50.0);

} // namespace seiscurate::resample

#endif
