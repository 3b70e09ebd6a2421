#include "seiscurate/well.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace seiscurate::well {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// One LAS parameter line: MNEM.UNIT  VALUE : DESCRIPTION
struct LasField {
  std::string mnemonic;
  std::string unit;
  std::string value;
  std::string description;
};

LasField parse_las_field(const std::string& line, const std::string& file,
                         std::size_t line_no) {
  const auto dot = line.find('.');
  if (dot == std::string::npos)
    throw ParseError(file, line_no, "LAS field line has no '.' separator");
  LasField f;
  f.mnemonic = upper(trim(line.substr(0, dot)));
  std::size_t i = dot + 1;
  while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
    ++i;
  f.unit = trim(line.substr(dot + 1, i - dot - 1));
  const auto colon = line.rfind(':');
  if (colon == std::string::npos || colon < i) {
    f.value = trim(line.substr(i));
  } else {
    f.value = trim(line.substr(i, colon - i));
    f.description = trim(line.substr(colon + 1));
  }
  return f;
}

double parse_double(const std::string& token, const std::string& file,
                    std::size_t line_no) {
  double v = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError(file, line_no, "cannot parse number '" + token + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

std::size_t LogCurve::unmasked_count() const {
  return static_cast<std::size_t>(
      std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

void CheckshotSeries::validate() const {
  if (depth_m.size() != twt_s.size())
    throw ValidationError("checkshot depth and time lengths differ");
  if (depth_m.empty()) throw ValidationError("checkshot series is empty");
  if (twt_s.front() < 0.0)
    throw ValidationError("checkshot two-way time is negative");
  for (std::size_t i = 1; i < depth_m.size(); ++i) {
    if (!(depth_m[i] > depth_m[i - 1]))
      throw ValidationError("checkshot depths not strictly increasing at row " +
                            std::to_string(i));
    if (!(twt_s[i] > twt_s[i - 1]))
      throw ValidationError(
          "checkshot times not strictly increasing at row " +
          std::to_string(i) + " (depth " + std::to_string(depth_m[i]) + " m)");
  }
}

const LogCurve* WellDataset::find_curve(const std::string& mnemonic) const {
  for (const auto& c : curves)
    if (c.mnemonic == mnemonic) return &c;
  return nullptr;
}

WellDataset parse_las(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  const std::string file = path.string();

  WellDataset ds;
  struct CurveDecl {
    std::string mnemonic, unit, description;
  };
  std::vector<CurveDecl> decls;
  std::vector<double> flat; // row-major ~A values
  bool saw_v = false, saw_w = false, saw_c = false, saw_a = false;
  bool version_ok = false;
  char section = 0;
  std::string line;
  std::size_t line_no = 0;
  std::size_t a_line_no = 0;
  std::vector<std::size_t> row_lines; // line number where each data row starts

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t[0] == '~') {
      section = t.size() > 1
                    ? static_cast<char>(std::toupper(static_cast<unsigned char>(t[1])))
                    : 0;
      if (section == 'V') saw_v = true;
      if (section == 'W') saw_w = true;
      if (section == 'C') saw_c = true;
      if (section == 'A') {
        saw_a = true;
        a_line_no = line_no;
      }
      continue;
    }
    switch (section) {
      case 'V': {
        const LasField f = parse_las_field(t, file, line_no);
        if (f.mnemonic == "VERS") {
          version_ok = f.value.rfind("2.", 0) == 0;
          if (!version_ok)
            throw ParseError(file, line_no,
                             "unsupported LAS version '" + f.value + "' (need 2.x)");
        } else if (f.mnemonic == "WRAP") {
          ds.wrap = upper(f.value) == "YES";
        }
        break;
      }
      case 'W': {
        const LasField f = parse_las_field(t, file, line_no);
        if (f.mnemonic == "WELL" && ds.well_id.empty()) ds.well_id = f.value;
        else if (f.mnemonic == "UWI" && ds.well_id.empty()) ds.well_id = f.value;
        else if (f.mnemonic == "NULL") ds.null_value = parse_double(f.value, file, line_no);
        else if (f.mnemonic == "XCOORD" || f.mnemonic == "X") {
          ds.surface_x = parse_double(f.value, file, line_no);
          ds.has_surface_xy = true;
        } else if (f.mnemonic == "YCOORD" || f.mnemonic == "Y") {
          ds.surface_y = parse_double(f.value, file, line_no);
        } else if (f.mnemonic == "EKB" || f.mnemonic == "KB") {
          ds.kb_elevation = parse_double(f.value, file, line_no);
        }
        break;
      }
      case 'C': {
        const LasField f = parse_las_field(t, file, line_no);
        decls.push_back({f.mnemonic, f.unit, f.description});
        break;
      }
      case 'A': {
        const auto tokens = split_ws(t);
        if (!ds.wrap && !decls.empty() && tokens.size() != decls.size())
          throw ParseError(file, line_no,
                           "data row has " + std::to_string(tokens.size()) +
                               " columns, ~C declares " +
                               std::to_string(decls.size()));
        if (!ds.wrap) row_lines.push_back(line_no);
        for (const auto& tok : tokens) flat.push_back(parse_double(tok, file, line_no));
        break;
      }
      default:
        break; // ~P / ~O and unknown sections are ignored
    }
  }

  if (!saw_v) throw ParseError(file, 0, "missing mandatory ~V section");
  if (!saw_w) throw ParseError(file, 0, "missing mandatory ~W section");
  if (!saw_c) throw ParseError(file, 0, "missing mandatory ~C section");
  if (!saw_a) throw ParseError(file, 0, "missing mandatory ~A section");
  if (!version_ok) throw ParseError(file, 0, "~V section has no VERS line");
  if (decls.size() < 2)
    throw ParseError(file, 0, "~C must declare the index plus at least one curve");
  if (flat.size() % decls.size() != 0)
    throw ParseError(file, a_line_no,
                     "~A token count " + std::to_string(flat.size()) +
                         " is not a multiple of the " +
                         std::to_string(decls.size()) + " declared curves");

  const std::size_t n_rows = flat.size() / decls.size();
  std::vector<double> depth(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) depth[r] = flat[r * decls.size()];
  for (std::size_t r = 1; r < n_rows; ++r)
    if (!(depth[r] > depth[r - 1]))
      throw ParseError(file, r < row_lines.size() ? row_lines[r] : a_line_no,
                       "depth not strictly increasing at data row " +
                           std::to_string(r + 1));

  ds.curves.reserve(decls.size() - 1);
  for (std::size_t c = 1; c < decls.size(); ++c) {
    LogCurve curve;
    curve.mnemonic = decls[c].mnemonic;
    curve.unit = decls[c].unit;
    curve.description = decls[c].description;
    curve.depth_m = depth;
    curve.values.resize(n_rows);
    curve.valid.resize(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double v = flat[r * decls.size() + c];
      curve.values[r] = v;
      curve.valid[r] = (v == ds.null_value) ? 0 : 1;
    }
    ds.curves.push_back(std::move(curve));
  }
  if (ds.well_id.empty())
    throw ParseError(file, 0, "~W section has no WELL or UWI identifier");
  return ds;
}

void write_las(const WellDataset& well, const std::filesystem::path& path,
               bool wrap) {
  if (well.curves.empty())
    throw ValidationError("cannot write a LAS file with no curves");
  const auto& depth = well.curves.front().depth_m;
  for (const auto& c : well.curves)
    if (c.depth_m != depth)
      throw ValidationError("all curves must share one depth vector for LAS export");

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");

  out << "~Version Information\n";
  out << " VERS.   2.0 : CWLS LOG ASCII STANDARD - VERSION 2.0\n";
  out << " WRAP.   " << (wrap ? "YES" : "NO ") << " : "
      << (wrap ? "Multiple lines per depth step" : "One line per depth step")
      << "\n";
  out << "~Well Information\n";
  const double strt = depth.empty() ? 0.0 : depth.front();
  const double stop = depth.empty() ? 0.0 : depth.back();
  out << " STRT.M  " << format_full(strt) << " : START DEPTH\n";
  out << " STOP.M  " << format_full(stop) << " : STOP DEPTH\n";
  out << " STEP.M  0 : STEP (0 = irregular)\n";
  out << " NULL.   " << format_full(well.null_value) << " : NULL VALUE\n";
  out << " WELL.   " << well.well_id << " : WELL\n";
  if (well.has_surface_xy) {
    out << " XCOORD.M " << format_full(well.surface_x) << " : SURFACE X\n";
    out << " YCOORD.M " << format_full(well.surface_y) << " : SURFACE Y\n";
  }
  out << " EKB.M   " << format_full(well.kb_elevation) << " : KB ELEVATION\n";
  out << "~Curve Information\n";
  out << " DEPT.M   : MEASURED DEPTH\n";
  for (const auto& c : well.curves)
    out << " " << c.mnemonic << "." << c.unit << "   : " << c.description << "\n";
  out << "~ASCII Data\n";
  for (std::size_t r = 0; r < depth.size(); ++r) {
    out << format_full(depth[r]);
    for (const auto& c : well.curves) {
      const double v = c.valid[r] ? c.values[r] : well.null_value;
      out << (wrap && &c == &well.curves.front() ? "\n" : " ") << format_full(v);
    }
    out << "\n";
  }
  if (!out) throw ValidationError("write failed on " + path.string());
}

CheckshotSeries parse_checkshot(const std::filesystem::path& path,
                                CheckshotUnits units) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  const std::string file = path.string();

  std::string line;
  std::size_t line_no = 0;
  int depth_col = -1, time_col = -1;
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split_csv(t);
    if (depth_col < 0) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const std::string name = upper(cells[c]);
        if (name == "DEPTH") depth_col = static_cast<int>(c);
        if (name == "TIME") time_col = static_cast<int>(c);
      }
      if (depth_col < 0 || time_col < 0)
        throw ParseError(file, line_no,
                         "header row must name 'depth' and 'time' columns");
      continue;
    }
    if (cells.size() <= static_cast<std::size_t>(std::max(depth_col, time_col)))
      throw ParseError(file, line_no, "row has too few columns");
    const double depth = parse_double(cells[depth_col], file, line_no);
    double time = parse_double(cells[time_col], file, line_no);
    if (units.unit == CheckshotUnits::TimeUnit::milliseconds) time *= 1e-3;
    if (units.kind == CheckshotUnits::TimeKind::one_way) time *= 2.0;
    if (time < 0.0)
      throw ParseError(file, line_no, "negative travel time " + std::to_string(time));
    rows.emplace_back(depth, time);
  }
  if (depth_col < 0) throw ParseError(file, 0, "missing header row");
  if (rows.empty()) throw ParseError(file, 0, "no data rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  CheckshotSeries cs;
  cs.depth_m.reserve(rows.size());
  cs.twt_s.reserve(rows.size());
  for (const auto& [depth, time] : rows) {
    cs.depth_m.push_back(depth);
    cs.twt_s.push_back(time);
  }
  cs.validate();
  return cs;
}

void write_checkshot_csv(const CheckshotSeries& series,
                         const std::filesystem::path& path,
                         CheckshotUnits units) {
  series.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << "depth,time\n";
  for (std::size_t i = 0; i < series.depth_m.size(); ++i) {
    double time = series.twt_s[i];
    if (units.kind == CheckshotUnits::TimeKind::one_way) time /= 2.0;
    if (units.unit == CheckshotUnits::TimeUnit::milliseconds) time *= 1e3;
    out << format_full(series.depth_m[i]) << "," << format_full(time) << "\n";
  }
  if (!out) throw ValidationError("write failed on " + path.string());
}

std::vector<AverageVelocitySample> average_velocity(const CheckshotSeries& cs) {
  cs.validate();
  std::vector<AverageVelocitySample> out;
  out.reserve(cs.depth_m.size());
  for (std::size_t i = 0; i < cs.depth_m.size(); ++i) {
    if (cs.twt_s[i] == 0.0) {
      if (cs.depth_m[i] > 0.0)
        throw ValidationError("zero travel time at nonzero depth " +
                              std::to_string(cs.depth_m[i]) + " m");
      continue; // surface point
    }
    out.push_back({cs.depth_m[i], cs.twt_s[i],
                   2.0 * cs.depth_m[i] / cs.twt_s[i]});
  }
  return out;
}

std::vector<ManifestWell> load_well_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("wells") || !j["wells"].is_array())
    throw ParseError(path.string(), 0, "manifest must contain a 'wells' array");

  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  std::vector<ManifestWell> wells;
  for (const auto& w : j["wells"]) {
    ManifestWell m;
    m.well_id = w.at("well_id").get<std::string>();
    if (w.contains("surface_x") && w.contains("surface_y")) {
      m.surface_x = w["surface_x"].get<double>();
      m.surface_y = w["surface_y"].get<double>();
      m.has_surface_xy = true;
    }
    m.datum_shift_m = w.value("datum_shift_m", 0.0);
    if (w.contains("las")) m.las_path = resolve(w["las"].get<std::string>());
    if (w.contains("checkshot"))
      m.checkshot_path = resolve(w["checkshot"].get<std::string>());
    if (w.contains("checkshot_units")) {
      const auto& u = w["checkshot_units"];
      const std::string unit = u.value("time", "ms");
      const std::string kind = u.value("kind", "two_way");
      if (unit == "s") m.checkshot_units.unit = CheckshotUnits::TimeUnit::seconds;
      else if (unit == "ms") m.checkshot_units.unit = CheckshotUnits::TimeUnit::milliseconds;
      else throw ParseError(path.string(), 0, "checkshot_units.time must be 's' or 'ms'");
      if (kind == "one_way") m.checkshot_units.kind = CheckshotUnits::TimeKind::one_way;
      else if (kind == "two_way") m.checkshot_units.kind = CheckshotUnits::TimeKind::two_way;
      else throw ParseError(path.string(), 0, "checkshot_units.kind must be 'one_way' or 'two_way'");
    }
    wells.push_back(std::move(m));
  }
  return wells;
}

WellDataset load_well(const ManifestWell& entry) {
  WellDataset ds = parse_las(entry.las_path);
  ds.well_id = entry.well_id.empty() ? ds.well_id : entry.well_id;
  if (entry.has_surface_xy) {
    ds.surface_x = entry.surface_x;
    ds.surface_y = entry.surface_y;
    ds.has_surface_xy = true;
  }
  if (!ds.has_surface_xy)
    throw ValidationError("well " + ds.well_id +
                          " has no surface coordinates (LAS ~W or manifest)");
  if (entry.datum_shift_m != 0.0)
    for (auto& c : ds.curves)
      for (auto& d : c.depth_m) d += entry.datum_shift_m;
  if (!entry.checkshot_path.empty()) {
    CheckshotSeries cs = parse_checkshot(entry.checkshot_path, entry.checkshot_units);
    if (entry.datum_shift_m != 0.0) {
      for (auto& d : cs.depth_m) d += entry.datum_shift_m;
      cs.validate();
    }
    ds.checkshots = std::move(cs);
  }
  return ds;
}

} // namespace seiscurate::well
