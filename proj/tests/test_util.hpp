#ifndef SEISCURATE_TEST_UTIL_HPP
#define SEISCURATE_TEST_UTIL_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "seiscurate/volume.hpp"

namespace testutil {

// Self-deleting temp directory per test case.
class TempDir {
public:
  TempDir() {
    auto pattern =
        (std::filesystem::temp_directory_path() / "seiscurate_XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

private:
  std::filesystem::path path_;
};

inline seiscurate::SeismicVolume make_volume(std::size_t n_il, std::size_t n_xl,
                                             std::size_t n_samples,
                                             double dt = 0.004) {
  seiscurate::SeismicVolume v;
  v.n_inline = n_il;
  v.n_crossline = n_xl;
  v.n_samples = n_samples;
  v.axis = seiscurate::Axis::time;
  v.sample_interval = dt;
  v.geometry.origin_x = 465000.0;
  v.geometry.origin_y = 6440000.0;
  v.geometry.il_dx = 0.0;
  v.geometry.il_dy = 25.0;
  v.geometry.xl_dx = 12.5;
  v.geometry.xl_dy = 0.0;
  v.geometry.inline_min = 100;
  v.geometry.crossline_min = 300;
  v.data.resize(n_il * n_xl * n_samples, 0.0);
  return v;
}

// Values exactly representable in float32, for bit-exact IEEE round trips.
inline void fill_float_exact(seiscurate::SeismicVolume& v, std::mt19937& rng) {
  std::uniform_real_distribution<float> dist(-1000.0f, 1000.0f);
  for (auto& x : v.data) x = static_cast<double>(dist(rng));
}

inline void patch_file(const std::filesystem::path& path, std::size_t offset,
                       const std::vector<unsigned char>& bytes) {
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(static_cast<std::streamoff>(offset));
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

} // namespace testutil

#endif
