#ifndef SEISCURATE_SEGY_HPP
#define SEISCURATE_SEGY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "seiscurate/geometry.hpp"
#include "seiscurate/volume.hpp"

namespace seiscurate::segy {

enum class SampleFormat : std::uint16_t {
  ibm_float32 = 1,
  int32 = 2,
  int16 = 3,
  ieee_float32 = 5,
};

std::size_t sample_width(SampleFormat format);

// 1-based byte positions inside the 240-byte trace header, rev-1
// defaults. Field files are inconsistent here, so these are config.
struct HeaderOffsets {
  int inline_no = 189;
  int crossline_no = 193;
  int cdp_x = 181;
  int cdp_y = 185;
  int coord_scalar = 71;
};

struct BinaryHeader {
  int sample_interval_us = 0;
  int samples_per_trace = 0;
  SampleFormat format = SampleFormat::ieee_float32;
  std::int64_t trace_count = 0;
  // Non-standard: unassigned rev-1 slot at bytes 3261-3262 marks the
  // vertical axis of our own intermediates (0 = time, 1 = depth). When
  // depth, sample_interval_us holds millimeters instead of microseconds.
  Axis axis = Axis::time;

  void validate() const;
};

struct TraceHeader {
  int inline_no = 0;
  int crossline_no = 0;
  double cdp_x = 0.0; // meters, coordinate scalar already applied
  double cdp_y = 0.0;
  std::int64_t trace_index = 0;
};

// IBM System/360 32-bit hexadecimal float: (-1)^s * 0.f24 * 16^(e-64).
double ibm_to_double(std::uint32_t word);
std::uint32_t double_to_ibm(double value);

// Big-endian sample codec. Throws on truncated buffers, unsupported
// format codes, and values unrepresentable in integer formats.
std::vector<double> decode_samples(std::span<const std::byte> bytes,
                                   SampleFormat format, std::size_t n);
std::vector<std::byte> encode_samples(std::span<const double> values,
                                      SampleFormat format);

// Streaming rev-1 reader: headers are validated on open, traces are read
// on demand in file order. Instances are single-consumer sequential.
class Reader {
public:
  explicit Reader(const std::filesystem::path& path, HeaderOffsets offsets = {});

  const BinaryHeader& header() const { return header_; }
  std::int64_t trace_count() const { return header_.trace_count; }
  const std::array<char, 3200>& textual_header_raw() const { return textual_; }
  // EBCDIC decoded to ASCII for display (pass-through if already ASCII).
  std::string textual_header_ascii() const;

  TraceHeader read_trace_header(std::int64_t index);
  std::vector<double> read_trace_samples(std::int64_t index);

  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
  HeaderOffsets offsets_;
  std::ifstream stream_;
  std::array<char, 3200> textual_{};
  BinaryHeader header_;
  std::size_t trace_bytes_ = 0;

  void seek_trace(std::int64_t index, std::size_t offset_in_trace);
};

struct DuplicateTrace {
  int inline_no = 0;
  int crossline_no = 0;
  std::int64_t first_index = 0;
  std::int64_t duplicate_index = 0;
};

// One row per trace, file order preserved; duplicates reported, never
// silently dropped.
struct TraceTable {
  std::vector<TraceHeader> rows;
  std::vector<DuplicateTrace> duplicates;
};

TraceTable scan_geometry(Reader& reader);

// Least-squares fit of the index->meters affine basis over the traces
// inside `rect`.
GridGeometry fit_grid_geometry(const TraceTable& table,
                               const geom::RectRegion& rect);

// Materializes the rectangle; every (inline, crossline) cell must be
// covered by exactly one trace.
SeismicVolume assemble_volume(Reader& reader, const TraceTable& table,
                              const geom::RectRegion& rect);

void write_segy(const SeismicVolume& volume, SampleFormat format,
                const std::filesystem::path& path, HeaderOffsets offsets = {});

// Convenience: read a whole volume previously written by write_segy
// (full-grid assembly).
SeismicVolume read_volume(const std::filesystem::path& path,
                          HeaderOffsets offsets = {});

} // namespace seiscurate::segy

#endif
