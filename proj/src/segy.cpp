#include "seiscurate/segy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>

namespace seiscurate::segy {

namespace {

constexpr std::size_t kTextualBytes = 3200;
constexpr std::size_t kBinaryBytes = 400;
constexpr std::size_t kTraceHeaderBytes = 240;
constexpr std::size_t kFileHeaderBytes = kTextualBytes + kBinaryBytes;

// Offsets inside the 400-byte binary header (0-based).
constexpr std::size_t kBinSampleInterval = 16; // bytes 3217-3218
constexpr std::size_t kBinSamplesPerTrace = 20; // bytes 3221-3222
constexpr std::size_t kBinFormatCode = 24;      // bytes 3225-3226
constexpr std::size_t kBinMeasurementSystem = 54; // bytes 3255-3256
constexpr std::size_t kBinAxisFlag = 60;        // bytes 3261-3262, unassigned in rev-1
constexpr std::size_t kBinRevision = 300;       // bytes 3501-3502
constexpr std::size_t kBinFixedLength = 302;    // bytes 3503-3504

// Trace header slots we always write alongside the configurable ones
// (1-based): samples at 115, interval at 117.
constexpr int kTrcSamples = 115;
constexpr int kTrcInterval = 117;

std::uint16_t load_u16(const char* p) {
  return static_cast<std::uint16_t>((static_cast<std::uint8_t>(p[0]) << 8) |
                                    static_cast<std::uint8_t>(p[1]));
}
std::int16_t load_i16(const char* p) {
  return static_cast<std::int16_t>(load_u16(p));
}
std::uint32_t load_u32(const char* p) {
  return (static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[0])) << 24) |
         (static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[1])) << 16) |
         (static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[2])) << 8) |
         static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[3]));
}
std::int32_t load_i32(const char* p) {
  return static_cast<std::int32_t>(load_u32(p));
}

void store_u16(char* p, std::uint16_t v) {
  p[0] = static_cast<char>(v >> 8);
  p[1] = static_cast<char>(v & 0xff);
}
void store_u32(char* p, std::uint32_t v) {
  p[0] = static_cast<char>(v >> 24);
  p[1] = static_cast<char>((v >> 16) & 0xff);
  p[2] = static_cast<char>((v >> 8) & 0xff);
  p[3] = static_cast<char>(v & 0xff);
}

double apply_coordinate_scalar(std::int32_t raw, std::int16_t scalar) {
  if (scalar > 0) return static_cast<double>(raw) * scalar;
  if (scalar < 0) return static_cast<double>(raw) / -scalar;
  return static_cast<double>(raw);
}

// ASCII <-> EBCDIC (code page 037), enough for textual headers.
const unsigned char kAsciiToEbcdic[256] = {
    0x00, 0x01, 0x02, 0x03, 0x37, 0x2D, 0x2E, 0x2F, 0x16, 0x05, 0x25, 0x0B,
    0x0C, 0x0D, 0x0E, 0x0F, 0x10, 0x11, 0x12, 0x13, 0x3C, 0x3D, 0x32, 0x26,
    0x18, 0x19, 0x3F, 0x27, 0x1C, 0x1D, 0x1E, 0x1F, 0x40, 0x5A, 0x7F, 0x7B,
    0x5B, 0x6C, 0x50, 0x7D, 0x4D, 0x5D, 0x5C, 0x4E, 0x6B, 0x60, 0x4B, 0x61,
    0xF0, 0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0x7A, 0x5E,
    0x4C, 0x7E, 0x6E, 0x6F, 0x7C, 0xC1, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7,
    0xC8, 0xC9, 0xD1, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xE2,
    0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xBA, 0xE0, 0xBB, 0xB0, 0x6D,
    0x79, 0x81, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x91, 0x92,
    0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6,
    0xA7, 0xA8, 0xA9, 0xC0, 0x4F, 0xD0, 0xA1, 0x07, 0x20, 0x21, 0x22, 0x23,
    0x24, 0x15, 0x06, 0x17, 0x28, 0x29, 0x2A, 0x2B, 0x2C, 0x09, 0x0A, 0x1B,
    0x30, 0x31, 0x1A, 0x33, 0x34, 0x35, 0x36, 0x08, 0x38, 0x39, 0x3A, 0x3B,
    0x04, 0x14, 0x3E, 0xFF, 0x41, 0xAA, 0x4A, 0xB1, 0x9F, 0xB2, 0x6A, 0xB5,
    0xBD, 0xB4, 0x9A, 0x8A, 0x5F, 0xCA, 0xAF, 0xBC, 0x90, 0x8F, 0xEA, 0xFA,
    0xBE, 0xA0, 0xB6, 0xB3, 0x9D, 0xDA, 0x9B, 0x8B, 0xB7, 0xB8, 0xB9, 0xAB,
    0x64, 0x65, 0x62, 0x66, 0x63, 0x67, 0x9E, 0x68, 0x74, 0x71, 0x72, 0x73,
    0x78, 0x75, 0x76, 0x77, 0xAC, 0x69, 0xED, 0xEE, 0xEB, 0xEF, 0xEC, 0xBF,
    0x80, 0xFD, 0xFE, 0xFB, 0xFC, 0xAD, 0xAE, 0x59, 0x44, 0x45, 0x42, 0x46,
    0x43, 0x47, 0x9C, 0x48, 0x54, 0x51, 0x52, 0x53, 0x58, 0x55, 0x56, 0x57,
    0x8C, 0x49, 0xCD, 0xCE, 0xCB, 0xCF, 0xCC, 0xE1, 0x70, 0xDD, 0xDE, 0xDB,
    0xDC, 0x8D, 0x8E, 0xDF};

unsigned char ebcdic_to_ascii_byte(unsigned char e) {
  static unsigned char table[256];
  static bool built = false;
  if (!built) {
    std::memset(table, '?', sizeof(table));
    for (int a = 0; a < 256; ++a) table[kAsciiToEbcdic[a]] = static_cast<unsigned char>(a);
    built = true;
  }
  return table[e];
}

std::int32_t checked_int_sample(double v, double lo, double hi,
                                const char* format_name) {
  const double r = std::round(v);
  if (!(r >= lo && r <= hi))
    throw ValidationError(std::string("sample value ") + std::to_string(v) +
                          " overflows " + format_name);
  return static_cast<std::int32_t>(r);
}

} // namespace

std::size_t sample_width(SampleFormat format) {
  switch (format) {
    case SampleFormat::ibm_float32:
    case SampleFormat::ieee_float32:
    case SampleFormat::int32:
      return 4;
    case SampleFormat::int16:
      return 2;
  }
  throw ValidationError("unsupported SEG-Y sample format code " +
                        std::to_string(static_cast<int>(format)));
}

void BinaryHeader::validate() const {
  if (sample_interval_us <= 0)
    throw ValidationError("binary header sample_interval_us must be > 0, got " +
                          std::to_string(sample_interval_us));
  if (samples_per_trace <= 0)
    throw ValidationError("binary header samples_per_trace must be > 0, got " +
                          std::to_string(samples_per_trace));
  sample_width(format); // throws on unsupported codes
}

double ibm_to_double(std::uint32_t word) {
  const std::uint32_t fraction = word & 0x00ffffffu;
  if (fraction == 0) return 0.0;
  const int sign = (word & 0x80000000u) ? -1 : 1;
  const int exponent = static_cast<int>((word >> 24) & 0x7f);
  // 0.f24 * 16^(e-64) == f * 2^(4*(e-64) - 24)
  return sign * std::ldexp(static_cast<double>(fraction),
                           4 * (exponent - 64) - 24);
}

std::uint32_t double_to_ibm(double value) {
  if (value == 0.0 || !std::isfinite(value)) return 0;
  const std::uint32_t sign = std::signbit(value) ? 0x80000000u : 0;
  double mag = std::abs(value);

  int p = 0;
  std::frexp(mag, &p); // mag in [2^(p-1), 2^p)
  // Base-16 exponent with fraction in [1/16, 1).
  int e4 = (p - 1 >= 0 ? (p - 1) / 4 : ((p - 1) - 3) / 4) + 1;
  std::uint64_t f =
      static_cast<std::uint64_t>(std::llround(std::ldexp(mag, 24 - 4 * e4)));
  if (f >= (1ull << 24)) { // rounding carried into a new hex digit
    ++e4;
    f >>= 4;
  }
  int exponent = e4 + 64;
  if (exponent > 127) return sign | 0x7fffffffu; // saturate
  while (exponent < 0 && f > 0) {                // flush toward zero
    f >>= 4;
    ++exponent;
  }
  if (f == 0) return 0;
  return sign | (static_cast<std::uint32_t>(exponent) << 24) |
         static_cast<std::uint32_t>(f & 0x00ffffffu);
}

std::vector<double> decode_samples(std::span<const std::byte> bytes,
                                   SampleFormat format, std::size_t n) {
  const std::size_t width = sample_width(format);
  if (bytes.size() != n * width)
    throw ValidationError("truncated sample buffer: expected " +
                          std::to_string(n * width) + " bytes, got " +
                          std::to_string(bytes.size()));
  std::vector<double> out(n);
  const char* p = reinterpret_cast<const char*>(bytes.data());
  switch (format) {
    case SampleFormat::ibm_float32:
      for (std::size_t i = 0; i < n; ++i) out[i] = ibm_to_double(load_u32(p + 4 * i));
      break;
    case SampleFormat::ieee_float32:
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t w = load_u32(p + 4 * i);
        float f;
        std::memcpy(&f, &w, sizeof(f));
        out[i] = f;
      }
      break;
    case SampleFormat::int32:
      for (std::size_t i = 0; i < n; ++i) out[i] = load_i32(p + 4 * i);
      break;
    case SampleFormat::int16:
      for (std::size_t i = 0; i < n; ++i) out[i] = load_i16(p + 2 * i);
      break;
  }
  return out;
}

std::vector<std::byte> encode_samples(std::span<const double> values,
                                      SampleFormat format) {
  const std::size_t width = sample_width(format);
  std::vector<std::byte> out(values.size() * width);
  char* p = reinterpret_cast<char*>(out.data());
  switch (format) {
    case SampleFormat::ibm_float32:
      for (std::size_t i = 0; i < values.size(); ++i)
        store_u32(p + 4 * i, double_to_ibm(values[i]));
      break;
    case SampleFormat::ieee_float32:
      for (std::size_t i = 0; i < values.size(); ++i) {
        const float f = static_cast<float>(values[i]);
        std::uint32_t w;
        std::memcpy(&w, &f, sizeof(w));
        store_u32(p + 4 * i, w);
      }
      break;
    case SampleFormat::int32:
      for (std::size_t i = 0; i < values.size(); ++i)
        store_u32(p + 4 * i, static_cast<std::uint32_t>(checked_int_sample(
                                 values[i], -2147483648.0, 2147483647.0, "INT32")));
      break;
    case SampleFormat::int16:
      for (std::size_t i = 0; i < values.size(); ++i)
        store_u16(p + 2 * i, static_cast<std::uint16_t>(static_cast<std::int16_t>(
                                 checked_int_sample(values[i], -32768.0, 32767.0,
                                                    "INT16"))));
      break;
  }
  return out;
}

Reader::Reader(const std::filesystem::path& path, HeaderOffsets offsets)
    : path_(path), offsets_(offsets) {
  stream_.open(path, std::ios::binary);
  if (!stream_)
    throw ParseError(path.string(), 0, "cannot open file");

  stream_.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::uint64_t>(stream_.tellg());
  if (file_size < kFileHeaderBytes)
    throw ParseError(path.string(), 0,
                     "file smaller than the 3600-byte SEG-Y header");

  stream_.seekg(0);
  stream_.read(textual_.data(), kTextualBytes);
  char bin[kBinaryBytes];
  stream_.read(bin, kBinaryBytes);
  if (!stream_)
    throw ParseError(path.string(), 0, "short read on file headers");

  header_.sample_interval_us = load_u16(bin + kBinSampleInterval);
  header_.samples_per_trace = load_u16(bin + kBinSamplesPerTrace);
  const int code = load_u16(bin + kBinFormatCode);
  header_.axis = load_u16(bin + kBinAxisFlag) == 1 ? Axis::depth : Axis::time;

  if (header_.samples_per_trace <= 0)
    throw ParseError(path.string(), kTextualBytes + kBinSamplesPerTrace,
                     "binary header samples_per_trace must be > 0, got " +
                         std::to_string(header_.samples_per_trace));
  if (header_.sample_interval_us <= 0)
    throw ParseError(path.string(), kTextualBytes + kBinSampleInterval,
                     "binary header sample_interval_us must be > 0, got " +
                         std::to_string(header_.sample_interval_us));
  switch (code) {
    case 1: header_.format = SampleFormat::ibm_float32; break;
    case 2: header_.format = SampleFormat::int32; break;
    case 3: header_.format = SampleFormat::int16; break;
    case 5: header_.format = SampleFormat::ieee_float32; break;
    default:
      throw ParseError(path.string(), kTextualBytes + kBinFormatCode,
                       "unsupported sample format code " + std::to_string(code));
  }

  trace_bytes_ = kTraceHeaderBytes +
                 static_cast<std::size_t>(header_.samples_per_trace) *
                     sample_width(header_.format);
  const std::uint64_t payload = file_size - kFileHeaderBytes;
  if (payload % trace_bytes_ != 0)
    throw ParseError(path_.string(), kFileHeaderBytes,
                     "trace length mismatch: " + std::to_string(payload) +
                         " payload bytes is not a multiple of " +
                         std::to_string(trace_bytes_) +
                         " bytes per trace (samples_per_trace=" +
                         std::to_string(header_.samples_per_trace) + ")");
  header_.trace_count = static_cast<std::int64_t>(payload / trace_bytes_);
}

std::string Reader::textual_header_ascii() const {
  // Score both encodings by letters/digits/spaces and keep the winner.
  auto score = [this](bool ebcdic) {
    std::size_t s = 0;
    for (char raw : textual_) {
      const unsigned char c =
          ebcdic ? ebcdic_to_ascii_byte(static_cast<unsigned char>(raw))
                 : static_cast<unsigned char>(raw);
      if (c == ' ' || std::isalnum(c)) ++s;
    }
    return s;
  };
  const bool use_ebcdic = score(true) >= score(false);
  std::string out;
  out.reserve(kTextualBytes + 40);
  for (std::size_t line = 0; line < 40; ++line) {
    for (std::size_t col = 0; col < 80; ++col) {
      const unsigned char c =
          static_cast<unsigned char>(textual_[line * 80 + col]);
      out.push_back(
          static_cast<char>(use_ebcdic ? ebcdic_to_ascii_byte(c) : c));
    }
    out.push_back('\n');
  }
  return out;
}

void Reader::seek_trace(std::int64_t index, std::size_t offset_in_trace) {
  if (index < 0 || index >= header_.trace_count)
    throw ValidationError("trace index " + std::to_string(index) +
                          " out of range [0, " +
                          std::to_string(header_.trace_count) + ")");
  stream_.clear();
  stream_.seekg(static_cast<std::streamoff>(
      kFileHeaderBytes + static_cast<std::uint64_t>(index) * trace_bytes_ +
      offset_in_trace));
}

TraceHeader Reader::read_trace_header(std::int64_t index) {
  seek_trace(index, 0);
  char buf[kTraceHeaderBytes];
  stream_.read(buf, kTraceHeaderBytes);
  if (!stream_)
    throw ParseError(path_.string(),
                     kFileHeaderBytes + static_cast<std::size_t>(index) * trace_bytes_,
                     "short read on trace header");

  const int ns = load_u16(buf + (kTrcSamples - 1));
  if (ns != 0 && ns != header_.samples_per_trace)
    throw ParseError(path_.string(),
                     kFileHeaderBytes + static_cast<std::size_t>(index) * trace_bytes_ +
                         (kTrcSamples - 1),
                     "trace " + std::to_string(index) + " has " +
                         std::to_string(ns) + " samples, binary header says " +
                         std::to_string(header_.samples_per_trace));

  TraceHeader th;
  th.trace_index = index;
  th.inline_no = load_i32(buf + (offsets_.inline_no - 1));
  th.crossline_no = load_i32(buf + (offsets_.crossline_no - 1));
  const std::int16_t scalar = load_i16(buf + (offsets_.coord_scalar - 1));
  th.cdp_x = apply_coordinate_scalar(load_i32(buf + (offsets_.cdp_x - 1)), scalar);
  th.cdp_y = apply_coordinate_scalar(load_i32(buf + (offsets_.cdp_y - 1)), scalar);
  return th;
}

std::vector<double> Reader::read_trace_samples(std::int64_t index) {
  seek_trace(index, kTraceHeaderBytes);
  const std::size_t nbytes =
      static_cast<std::size_t>(header_.samples_per_trace) *
      sample_width(header_.format);
  std::vector<std::byte> buf(nbytes);
  stream_.read(reinterpret_cast<char*>(buf.data()),
               static_cast<std::streamsize>(nbytes));
  if (!stream_)
    throw ParseError(path_.string(),
                     kFileHeaderBytes + static_cast<std::size_t>(index) * trace_bytes_ +
                         kTraceHeaderBytes,
                     "short read on trace samples");
  return decode_samples(buf, header_.format,
                        static_cast<std::size_t>(header_.samples_per_trace));
}

TraceTable scan_geometry(Reader& reader) {
  TraceTable table;
  table.rows.reserve(static_cast<std::size_t>(reader.trace_count()));
  std::map<std::pair<int, int>, std::int64_t> seen;
  for (std::int64_t i = 0; i < reader.trace_count(); ++i) {
    TraceHeader th = reader.read_trace_header(i);
    const auto key = std::make_pair(th.inline_no, th.crossline_no);
    auto [it, inserted] = seen.emplace(key, i);
    if (!inserted)
      table.duplicates.push_back(
          {th.inline_no, th.crossline_no, it->second, i});
    table.rows.push_back(th);
  }
  return table;
}

GridGeometry fit_grid_geometry(const TraceTable& table,
                               const geom::RectRegion& rect) {
  // x(i,j) = ox + i*il_dx + j*xl_dx, i/j relative to the rect corner.
  // Normal equations on index-centered coordinates keep this well
  // conditioned for survey-sized index ranges.
  double si = 0, sj = 0, n = 0;
  for (const auto& row : table.rows) {
    if (row.inline_no < rect.inline_min || row.inline_no > rect.inline_max ||
        row.crossline_no < rect.crossline_min ||
        row.crossline_no > rect.crossline_max)
      continue;
    si += row.inline_no - rect.inline_min;
    sj += row.crossline_no - rect.crossline_min;
    n += 1;
  }
  if (n < 3)
    throw ValidationError("need at least 3 traces inside the rectangle to fit geometry");
  const double mi = si / n, mj = sj / n;

  double sii = 0, sjj = 0, sij = 0;
  double six = 0, sjx = 0, sx = 0;
  double siy = 0, sjy = 0, sy = 0;
  for (const auto& row : table.rows) {
    if (row.inline_no < rect.inline_min || row.inline_no > rect.inline_max ||
        row.crossline_no < rect.crossline_min ||
        row.crossline_no > rect.crossline_max)
      continue;
    const double i = row.inline_no - rect.inline_min - mi;
    const double j = row.crossline_no - rect.crossline_min - mj;
    sii += i * i;
    sjj += j * j;
    sij += i * j;
    six += i * row.cdp_x;
    sjx += j * row.cdp_x;
    sx += row.cdp_x;
    siy += i * row.cdp_y;
    sjy += j * row.cdp_y;
    sy += row.cdp_y;
  }
  GridGeometry g;
  g.inline_min = rect.inline_min;
  g.crossline_min = rect.crossline_min;

  const double det = sii * sjj - sij * sij;
  if (std::abs(det) > 1e-9) {
    g.il_dx = (six * sjj - sjx * sij) / det;
    g.xl_dx = (sjx * sii - six * sij) / det;
    g.il_dy = (siy * sjj - sjy * sij) / det;
    g.xl_dy = (sjy * sii - siy * sij) / det;
  } else if (sii > 1e-9 && sjj <= 1e-9) {
    // Single crossline: 1D fit along inline, perpendicular unit basis
    // synthesized so the geometry stays invertible.
    g.il_dx = six / sii;
    g.il_dy = siy / sii;
    const double len = std::hypot(g.il_dx, g.il_dy);
    if (len < 1e-12)
      throw ValidationError("degenerate trace layout: cannot fit grid basis");
    g.xl_dx = -g.il_dy / len;
    g.xl_dy = g.il_dx / len;
  } else if (sjj > 1e-9 && sii <= 1e-9) {
    g.xl_dx = sjx / sjj;
    g.xl_dy = sjy / sjj;
    const double len = std::hypot(g.xl_dx, g.xl_dy);
    if (len < 1e-12)
      throw ValidationError("degenerate trace layout: cannot fit grid basis");
    g.il_dx = g.xl_dy / len;
    g.il_dy = -g.xl_dx / len;
  } else {
    throw ValidationError("degenerate trace layout: cannot fit grid basis");
  }
  g.origin_x = sx / n - g.il_dx * mi - g.xl_dx * mj;
  g.origin_y = sy / n - g.il_dy * mi - g.xl_dy * mj;
  return g;
}

SeismicVolume assemble_volume(Reader& reader, const TraceTable& table,
                              const geom::RectRegion& rect) {
  const std::size_t n_il = rect.n_inline();
  const std::size_t n_xl = rect.n_crossline();
  const auto n_samples = static_cast<std::size_t>(reader.header().samples_per_trace);

  std::vector<std::int64_t> slot(n_il * n_xl, -1);
  for (const auto& row : table.rows) {
    if (row.inline_no < rect.inline_min || row.inline_no > rect.inline_max ||
        row.crossline_no < rect.crossline_min ||
        row.crossline_no > rect.crossline_max)
      continue;
    const std::size_t i = static_cast<std::size_t>(row.inline_no - rect.inline_min);
    const std::size_t j =
        static_cast<std::size_t>(row.crossline_no - rect.crossline_min);
    slot[i * n_xl + j] = row.trace_index;
  }
  for (std::size_t i = 0; i < n_il; ++i)
    for (std::size_t j = 0; j < n_xl; ++j)
      if (slot[i * n_xl + j] < 0)
        throw ValidationError(
            "missing trace inside rectangle at (inline " +
            std::to_string(rect.inline_min + static_cast<int>(i)) +
            ", crossline " +
            std::to_string(rect.crossline_min + static_cast<int>(j)) + ")");

  SeismicVolume v;
  v.n_inline = n_il;
  v.n_crossline = n_xl;
  v.n_samples = n_samples;
  v.axis = reader.header().axis;
  v.sample_interval = reader.header().axis == Axis::time
                          ? reader.header().sample_interval_us * 1e-6
                          : reader.header().sample_interval_us * 1e-3;
  v.geometry = fit_grid_geometry(table, rect);
  v.data.resize(n_il * n_xl * n_samples);
  for (std::size_t i = 0; i < n_il; ++i)
    for (std::size_t j = 0; j < n_xl; ++j) {
      const auto samples = reader.read_trace_samples(slot[i * n_xl + j]);
      std::copy(samples.begin(), samples.end(), v.trace(i, j).begin());
    }
  v.validate();
  return v;
}

void write_segy(const SeismicVolume& volume, SampleFormat format,
                const std::filesystem::path& path, HeaderOffsets offsets) {
  volume.validate();
  if (volume.n_samples > 32767)
    throw ValidationError("samples_per_trace exceeds the 16-bit header field");
  const int interval = volume.axis == Axis::time
                           ? static_cast<int>(std::llround(volume.sample_interval * 1e6))
                           : static_cast<int>(std::llround(volume.sample_interval * 1e3));
  if (interval <= 0 || interval > 65535)
    throw ValidationError("sample interval does not fit the 16-bit header field");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ValidationError("cannot open " + path.string() + " for writing");

  // Textual header: 40 EBCDIC card images.
  std::array<char, kTextualBytes> text;
  text.fill(' ');
  auto put_line = [&](std::size_t line, const std::string& s) {
    char card[81];
    std::snprintf(card, sizeof(card), "C%02zu %-76s", line + 1,
                  s.substr(0, 76).c_str());
    std::memcpy(text.data() + line * 80, card, 80);
  };
  for (std::size_t line = 0; line < 40; ++line) put_line(line, "");
  put_line(0, "SEISCURATE VOLUME EXPORT");
  put_line(1, volume.axis == Axis::time ? "VERTICAL AXIS: TIME (TWT)"
                                        : "VERTICAL AXIS: DEPTH (M)");
  put_line(2, "CRS: " + (volume.crs_tag.empty() ? "UNSET" : volume.crs_tag));
  put_line(3, "INLINE BYTES 189-192, CROSSLINE 193-196, CDP XY 181-188");
  put_line(39, "END TEXTUAL HEADER");
  for (char& c : text)
    c = static_cast<char>(kAsciiToEbcdic[static_cast<unsigned char>(c)]);
  out.write(text.data(), kTextualBytes);

  char bin[kBinaryBytes] = {0};
  store_u16(bin + kBinSampleInterval, static_cast<std::uint16_t>(interval));
  store_u16(bin + kBinSamplesPerTrace,
            static_cast<std::uint16_t>(volume.n_samples));
  store_u16(bin + kBinFormatCode, static_cast<std::uint16_t>(format));
  store_u16(bin + kBinMeasurementSystem, 1); // meters
  store_u16(bin + kBinAxisFlag, volume.axis == Axis::depth ? 1 : 0);
  store_u16(bin + kBinRevision, 0x0100);
  store_u16(bin + kBinFixedLength, 1);
  out.write(bin, kBinaryBytes);

  // Coordinates carried in centimeters (scalar -100).
  constexpr std::int16_t kScalar = -100;
  std::vector<char> trace_header(kTraceHeaderBytes);
  for (std::size_t i = 0; i < volume.n_inline; ++i) {
    for (std::size_t j = 0; j < volume.n_crossline; ++j) {
      std::fill(trace_header.begin(), trace_header.end(), 0);
      double x, y;
      volume.geometry.xy_at(static_cast<double>(i), static_cast<double>(j), x, y);
      const auto cm_x = std::llround(x * 100.0);
      const auto cm_y = std::llround(y * 100.0);
      if (cm_x > std::numeric_limits<std::int32_t>::max() ||
          cm_x < std::numeric_limits<std::int32_t>::min() ||
          cm_y > std::numeric_limits<std::int32_t>::max() ||
          cm_y < std::numeric_limits<std::int32_t>::min())
        throw ValidationError("coordinate overflows 32-bit centimeter encoding");
      store_u32(trace_header.data(),
                static_cast<std::uint32_t>(i * volume.n_crossline + j + 1));
      store_u16(trace_header.data() + (offsets.coord_scalar - 1),
                static_cast<std::uint16_t>(kScalar));
      store_u32(trace_header.data() + (offsets.cdp_x - 1),
                static_cast<std::uint32_t>(static_cast<std::int32_t>(cm_x)));
      store_u32(trace_header.data() + (offsets.cdp_y - 1),
                static_cast<std::uint32_t>(static_cast<std::int32_t>(cm_y)));
      store_u32(trace_header.data() + (offsets.inline_no - 1),
                static_cast<std::uint32_t>(volume.geometry.inline_min +
                                           static_cast<int>(i)));
      store_u32(trace_header.data() + (offsets.crossline_no - 1),
                static_cast<std::uint32_t>(volume.geometry.crossline_min +
                                           static_cast<int>(j)));
      store_u16(trace_header.data() + (kTrcSamples - 1),
                static_cast<std::uint16_t>(volume.n_samples));
      store_u16(trace_header.data() + (kTrcInterval - 1),
                static_cast<std::uint16_t>(interval));
      out.write(trace_header.data(), kTraceHeaderBytes);

      const auto bytes = encode_samples(volume.trace(i, j), format);
      out.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
    }
  }
  if (!out)
    throw ValidationError("write failed on " + path.string());
}

SeismicVolume read_volume(const std::filesystem::path& path,
                          HeaderOffsets offsets) {
  Reader reader(path, offsets);
  TraceTable table = scan_geometry(reader);
  if (!table.duplicates.empty())
    throw ValidationError(path.string() + ": duplicate (inline, crossline) traces");
  int il_min = table.rows.front().inline_no, il_max = il_min;
  int xl_min = table.rows.front().crossline_no, xl_max = xl_min;
  for (const auto& row : table.rows) {
    il_min = std::min(il_min, row.inline_no);
    il_max = std::max(il_max, row.inline_no);
    xl_min = std::min(xl_min, row.crossline_no);
    xl_max = std::max(xl_max, row.crossline_no);
  }
  return assemble_volume(reader, table, {il_min, il_max, xl_min, xl_max});
}

} // namespace seiscurate::segy
