#include "seiscurate/store.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>

#include <hdf5.h>
#include <json.hpp>

namespace seiscurate::store {

namespace {

// Thin RAII wrapper over hid_t.
class Handle {
public:
  using Closer = herr_t (*)(hid_t);
  Handle(hid_t id, Closer closer, const std::string& what)
      : id_(id), closer_(closer) {
    if (id_ < 0) throw Error("HDF5: failed to " + what);
  }
  ~Handle() {
    if (id_ >= 0) closer_(id_);
  }
  Handle(Handle&& o) noexcept : id_(o.id_), closer_(o.closer_) { o.id_ = -1; }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  operator hid_t() const { return id_; }

private:
  hid_t id_;
  Closer closer_;
};

Handle make_quiet_fapl() {
  return {H5Pcreate(H5P_FILE_ACCESS), H5Pclose, "create file access plist"};
}

// Object creation without timestamps keeps reruns byte stable.
Handle make_untracked_pcl(hid_t cls) {
  Handle p(H5Pcreate(cls), H5Pclose, "create property list");
  H5Pset_obj_track_times(p, false);
  return p;
}

void write_string_attr(hid_t loc, const char* name, const std::string& value) {
  Handle space(H5Screate(H5S_SCALAR), H5Sclose, "create attr space");
  Handle type(H5Tcopy(H5T_C_S1), H5Tclose, "copy string type");
  H5Tset_size(type, std::max<std::size_t>(value.size(), 1));
  H5Tset_strpad(type, H5T_STR_NULLPAD);
  Handle attr(H5Acreate2(loc, name, type, space, H5P_DEFAULT, H5P_DEFAULT),
              H5Aclose, std::string("create attribute ") + name);
  // NULLPAD of an empty string still needs one byte of storage.
  std::string padded = value.empty() ? std::string(1, '\0') : value;
  H5Awrite(attr, type, padded.data());
}

std::string read_string_attr(hid_t loc, const char* name) {
  if (H5Aexists(loc, name) <= 0)
    throw Error(std::string("HDF5: missing attribute ") + name);
  Handle attr(H5Aopen(loc, name, H5P_DEFAULT), H5Aclose,
              std::string("open attribute ") + name);
  Handle type(H5Aget_type(attr), H5Tclose, "get attr type");
  const std::size_t size = H5Tget_size(type);
  std::string out(size, '\0');
  Handle memtype(H5Tcopy(H5T_C_S1), H5Tclose, "copy string type");
  H5Tset_size(memtype, std::max<std::size_t>(size, 1));
  H5Tset_strpad(memtype, H5T_STR_NULLPAD);
  if (H5Aread(attr, memtype, out.data()) < 0)
    throw Error(std::string("HDF5: cannot read attribute ") + name);
  while (!out.empty() && out.back() == '\0') out.pop_back();
  return out;
}

void write_double_attr(hid_t loc, const char* name, double value) {
  Handle space(H5Screate(H5S_SCALAR), H5Sclose, "create attr space");
  Handle attr(H5Acreate2(loc, name, H5T_NATIVE_DOUBLE, space, H5P_DEFAULT,
                         H5P_DEFAULT),
              H5Aclose, std::string("create attribute ") + name);
  H5Awrite(attr, H5T_NATIVE_DOUBLE, &value);
}

double read_double_attr(hid_t loc, const char* name) {
  Handle attr(H5Aopen(loc, name, H5P_DEFAULT), H5Aclose,
              std::string("open attribute ") + name);
  double v = 0;
  H5Aread(attr, H5T_NATIVE_DOUBLE, &v);
  return v;
}

void write_uint_attr(hid_t loc, const char* name, std::uint32_t value) {
  Handle space(H5Screate(H5S_SCALAR), H5Sclose, "create attr space");
  Handle attr(H5Acreate2(loc, name, H5T_NATIVE_UINT32, space, H5P_DEFAULT,
                         H5P_DEFAULT),
              H5Aclose, std::string("create attribute ") + name);
  H5Awrite(attr, H5T_NATIVE_UINT32, &value);
}

std::uint32_t read_uint_attr(hid_t loc, const char* name) {
  Handle attr(H5Aopen(loc, name, H5P_DEFAULT), H5Aclose,
              std::string("open attribute ") + name);
  std::uint32_t v = 0;
  H5Aread(attr, H5T_NATIVE_UINT32, &v);
  return v;
}

Handle create_group(hid_t loc, const std::string& name) {
  Handle gcpl = make_untracked_pcl(H5P_GROUP_CREATE);
  return {H5Gcreate2(loc, name.c_str(), H5P_DEFAULT, gcpl, H5P_DEFAULT),
          H5Gclose, "create group " + name};
}

template <typename T>
void write_dataset(hid_t loc, const std::string& name, hid_t type,
                   const std::vector<hsize_t>& dims, const T* data) {
  Handle space(H5Screate_simple(static_cast<int>(dims.size()), dims.data(),
                                nullptr),
               H5Sclose, "create dataspace");
  Handle dcpl = make_untracked_pcl(H5P_DATASET_CREATE);
  Handle ds(H5Dcreate2(loc, name.c_str(), type, space, H5P_DEFAULT, dcpl,
                       H5P_DEFAULT),
            H5Dclose, "create dataset " + name);
  if (H5Dwrite(ds, type, H5S_ALL, H5S_ALL, H5P_DEFAULT, data) < 0)
    throw Error("HDF5: write failed for dataset " + name);
}

std::vector<hsize_t> dataset_dims(hid_t ds) {
  Handle space(H5Dget_space(ds), H5Sclose, "get dataspace");
  const int rank = H5Sget_simple_extent_ndims(space);
  std::vector<hsize_t> dims(static_cast<std::size_t>(rank));
  H5Sget_simple_extent_dims(space, dims.data(), nullptr);
  return dims;
}

std::vector<std::string> child_names(hid_t loc) {
  H5G_info_t info;
  H5Gget_info(loc, &info);
  std::vector<std::string> names;
  for (hsize_t i = 0; i < info.nlinks; ++i) {
    const ssize_t len = H5Lget_name_by_idx(loc, ".", H5_INDEX_NAME, H5_ITER_INC,
                                           i, nullptr, 0, H5P_DEFAULT);
    std::string name(static_cast<std::size_t>(len), '\0');
    H5Lget_name_by_idx(loc, ".", H5_INDEX_NAME, H5_ITER_INC, i, name.data(),
                       name.size() + 1, H5P_DEFAULT);
    names.push_back(name);
  }
  return names;
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
}

void hash_string(std::uint64_t& h, const std::string& s) {
  const std::uint64_t len = s.size();
  hash_bytes(h, &len, sizeof(len));
  hash_bytes(h, s.data(), s.size());
}

} // namespace

void CuratedSection::validate() const {
  if (id.empty()) throw ValidationError("curated section id is empty");
  if (seismic.size() != kTileLateral * kTileDepth)
    throw ValidationError("section " + id + " seismic array is not " +
                          std::to_string(kTileLateral) + "x" +
                          std::to_string(kTileDepth));
  std::set<std::string> names;
  for (const auto& tie : wells) {
    if (tie.lateral_index >= kTileLateral)
      throw ValidationError("section " + id + " well " + tie.well_id +
                            " tick index out of [0, " +
                            std::to_string(kTileLateral) + ")");
    if (!names.insert(tie.well_id).second)
      throw ValidationError("section " + id + " has duplicate well " + tie.well_id);
    for (const auto& c : tie.curves)
      if (c.values.size() != kTileDepth || c.valid.size() != kTileDepth)
        throw ValidationError("section " + id + " curve " + c.mnemonic +
                              " is not " + std::to_string(kTileDepth) + " samples");
  }
}

void DatasetManifest::validate() const {
  std::set<std::string> ids(section_ids.begin(), section_ids.end());
  if (ids.size() != section_ids.size())
    throw ValidationError("manifest section ids are not unique");
}

void write_hdf5(const std::vector<CuratedSection>& sections,
                const DatasetManifest& manifest,
                const std::filesystem::path& path) {
  // All validation happens before any byte is written.
  manifest.validate();
  std::set<std::string> ids;
  for (const auto& s : sections) {
    s.validate();
    if (!ids.insert(s.id).second)
      throw ValidationError("duplicate section id '" + s.id + "'");
  }
  if (manifest.section_ids.size() != sections.size())
    throw ValidationError("manifest section count does not match sections");
  for (const auto& id : manifest.section_ids)
    if (!ids.count(id))
      throw ValidationError("manifest lists unknown section '" + id + "'");

  Handle fcpl = make_untracked_pcl(H5P_FILE_CREATE);
  Handle fapl = make_quiet_fapl();
  Handle file(H5Fcreate(path.string().c_str(), H5F_ACC_TRUNC, fcpl, fapl),
              H5Fclose, "create file " + path.string());

  write_string_attr(file, "version", kStoreVersion);
  nlohmann::json mj;
  mj["section_ids"] = manifest.section_ids;
  mj["count"] = manifest.section_ids.size();
  mj["config_hash"] = manifest.config_hash;
  mj["pipeline_version"] = manifest.pipeline_version;
  mj["created"] = manifest.created;
  write_string_attr(file, "manifest", mj.dump());

  Handle root = create_group(file, "sections");
  for (const auto& s : sections) {
    Handle g = create_group(root, s.id);
    write_dataset(g, "seismic", H5T_IEEE_F32LE,
                  {hsize_t{kTileLateral}, hsize_t{kTileDepth}},
                  s.seismic.data());
    write_double_attr(g, "dz", kTileSpacing);
    write_double_attr(g, "dx", kTileSpacing);
    write_string_attr(g, "crs_tag", s.crs_tag);
    write_string_attr(g, "line_id", s.line_id);
    nlohmann::json prov;
    prov["survey_id"] = s.survey_id;
    prov["config_hash"] = s.config_hash;
    write_string_attr(g, "provenance", prov.dump());

    Handle wells = create_group(g, "wells");
    for (const auto& tie : s.wells) {
      Handle wg = create_group(wells, tie.well_id);
      write_uint_attr(wg, "lateral_index", tie.lateral_index);
      for (const auto& c : tie.curves) {
        write_dataset(wg, c.mnemonic, H5T_IEEE_F32LE, {hsize_t{kTileDepth}},
                      c.values.data());
        write_dataset(wg, c.mnemonic + "_mask", H5T_STD_U8LE,
                      {hsize_t{kTileDepth}}, c.valid.data());
        Handle ds(H5Dopen2(wg, c.mnemonic.c_str(), H5P_DEFAULT), H5Dclose,
                  "open curve dataset");
        write_string_attr(ds, "unit", c.unit);
      }
    }
  }
}

CuratedDataset read_hdf5(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw Error("HDF5 file does not exist: " + path.string());
  Handle fapl = make_quiet_fapl();
  Handle file(H5Fopen(path.string().c_str(), H5F_ACC_RDONLY, fapl), H5Fclose,
              "open file " + path.string());

  const std::string version = read_string_attr(file, "version");
  if (version != kStoreVersion)
    throw Error("HDF5 store version mismatch: file has '" + version +
                "', reader expects '" + kStoreVersion + "'");

  CuratedDataset out;
  nlohmann::json mj;
  try {
    mj = nlohmann::json::parse(read_string_attr(file, "manifest"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid manifest JSON: ") + e.what());
  }
  out.manifest.section_ids = mj.at("section_ids").get<std::vector<std::string>>();
  out.manifest.config_hash = mj.value("config_hash", "");
  out.manifest.pipeline_version = mj.value("pipeline_version", "");
  out.manifest.created = mj.value("created", "");
  out.manifest.validate();

  Handle root(H5Gopen2(file, "sections", H5P_DEFAULT), H5Gclose,
              "open /sections");
  const auto names = child_names(root);
  if (names.size() != out.manifest.section_ids.size())
    throw Error("manifest lists " +
                std::to_string(out.manifest.section_ids.size()) +
                " sections but the file stores " + std::to_string(names.size()));
  const std::set<std::string> listed(out.manifest.section_ids.begin(),
                                     out.manifest.section_ids.end());
  for (const auto& name : names)
    if (!listed.count(name))
      throw Error("section '" + name + "' is not listed in the manifest");

  for (const auto& name : names) {
    Handle g(H5Gopen2(root, name.c_str(), H5P_DEFAULT), H5Gclose,
             "open section " + name);
    CuratedSection s;
    s.id = name;
    s.line_id = read_string_attr(g, "line_id");
    s.crs_tag = read_string_attr(g, "crs_tag");
    const auto prov = nlohmann::json::parse(read_string_attr(g, "provenance"));
    s.survey_id = prov.value("survey_id", "");
    s.config_hash = prov.value("config_hash", "");
    const double dz = read_double_attr(g, "dz");
    const double dx = read_double_attr(g, "dx");
    if (dz != kTileSpacing || dx != kTileSpacing)
      throw Error("section " + name + " spacing is not " +
                  std::to_string(kTileSpacing) + " m");

    Handle ds(H5Dopen2(g, "seismic", H5P_DEFAULT), H5Dclose,
              "open seismic dataset");
    const auto dims = dataset_dims(ds);
    if (dims.size() != 2 || dims[0] != kTileLateral || dims[1] != kTileDepth)
      throw Error("section " + name + " seismic shape is not " +
                  std::to_string(kTileLateral) + "x" +
                  std::to_string(kTileDepth));
    s.seismic.resize(kTileLateral * kTileDepth);
    if (H5Dread(ds, H5T_IEEE_F32LE, H5S_ALL, H5S_ALL, H5P_DEFAULT,
                s.seismic.data()) < 0)
      throw Error("HDF5: cannot read seismic array of section " + name);

    Handle wells(H5Gopen2(g, "wells", H5P_DEFAULT), H5Gclose,
                 "open wells group");
    for (const auto& wname : child_names(wells)) {
      Handle wg(H5Gopen2(wells, wname.c_str(), H5P_DEFAULT), H5Gclose,
                "open well " + wname);
      WellTie tie;
      tie.well_id = wname;
      tie.lateral_index = read_uint_attr(wg, "lateral_index");
      for (const auto& cname : child_names(wg)) {
        if (cname.size() > 5 && cname.ends_with("_mask")) continue;
        CuratedCurve c;
        c.mnemonic = cname;
        Handle cds(H5Dopen2(wg, cname.c_str(), H5P_DEFAULT), H5Dclose,
                   "open curve " + cname);
        const auto cdims = dataset_dims(cds);
        if (cdims.size() != 1 || cdims[0] != kTileDepth)
          throw Error("curve " + cname + " shape is not " +
                      std::to_string(kTileDepth));
        c.values.resize(kTileDepth);
        H5Dread(cds, H5T_IEEE_F32LE, H5S_ALL, H5S_ALL, H5P_DEFAULT,
                c.values.data());
        c.unit = read_string_attr(cds, "unit");
        Handle mds(H5Dopen2(wg, (cname + "_mask").c_str(), H5P_DEFAULT),
                   H5Dclose, "open mask of " + cname);
        c.valid.resize(kTileDepth);
        H5Dread(mds, H5T_STD_U8LE, H5S_ALL, H5S_ALL, H5P_DEFAULT,
                c.valid.data());
        tie.curves.push_back(std::move(c));
      }
      s.wells.push_back(std::move(tie));
    }
    s.validate();
    out.sections.push_back(std::move(s));
  }
  return out;
}

std::uint64_t content_hash(const CuratedDataset& dataset) {
  std::uint64_t h = 1469598103934665603ull; // FNV offset basis
  hash_string(h, kStoreVersion);
  hash_string(h, dataset.manifest.config_hash);
  hash_string(h, dataset.manifest.pipeline_version);
  // manifest.created intentionally excluded
  auto ids = dataset.manifest.section_ids;
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) hash_string(h, id);

  auto sections = dataset.sections;
  std::sort(sections.begin(), sections.end(),
            [](const CuratedSection& a, const CuratedSection& b) {
              return a.id < b.id;
            });
  for (const auto& s : sections) {
    hash_string(h, s.id);
    hash_string(h, s.line_id);
    hash_string(h, s.crs_tag);
    hash_string(h, s.survey_id);
    hash_string(h, s.config_hash);
    hash_bytes(h, s.seismic.data(), s.seismic.size() * sizeof(float));
    auto wells = s.wells;
    std::sort(wells.begin(), wells.end(),
              [](const WellTie& a, const WellTie& b) {
                return a.well_id < b.well_id;
              });
    for (const auto& tie : wells) {
      hash_string(h, tie.well_id);
      hash_bytes(h, &tie.lateral_index, sizeof(tie.lateral_index));
      auto curves = tie.curves;
      std::sort(curves.begin(), curves.end(),
                [](const CuratedCurve& a, const CuratedCurve& b) {
                  return a.mnemonic < b.mnemonic;
                });
      for (const auto& c : curves) {
        hash_string(h, c.mnemonic);
        hash_string(h, c.unit);
        hash_bytes(h, c.values.data(), c.values.size() * sizeof(float));
        hash_bytes(h, c.valid.data(), c.valid.size());
      }
    }
  }
  return h;
}

void write_qc_report(const QcArtifacts& artifacts,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::ofstream csv(dir / "qc_velocity.csv", std::ios::trunc);
  if (!csv) throw Error("cannot write " + (dir / "qc_velocity.csv").string());
  csv << "well_id,depth_m,twt_s,v_checkshot,v_interp,rel_err\n";
  csv.precision(12);
  for (const auto& row : artifacts.velocity_qc.rows)
    csv << row.well_id << "," << row.depth_m << "," << row.twt_s << ","
        << row.v_checkshot << "," << row.v_interp << "," << row.rel_err << "\n";

  nlohmann::json j;
  j["wells"] = nlohmann::json::array();
  double overall_max = 0.0;
  for (const auto& w : artifacts.velocity_qc.wells) {
    j["wells"].push_back({{"well_id", w.well_id},
                          {"inside", w.inside},
                          {"sample_count", w.sample_count},
                          {"max_rel_err", w.max_rel_err},
                          {"mean_rel_err", w.mean_rel_err}});
    overall_max = std::max(overall_max, w.max_rel_err);
  }
  j["max_rel_err"] = overall_max;
  j["velocity_clamp_count"] = artifacts.velocity_clamp_count;
  j["depth_clamp_count"] = artifacts.depth_clamp_count;
  j["duplicate_trace_count"] = artifacts.duplicate_trace_count;
  j["excluded_wells"] = artifacts.excluded_wells;
  j["spacing_flags"] = artifacts.spacing_flags;
  nlohmann::json ring = nlohmann::json::array();
  for (const auto& p : artifacts.hull_polygon) ring.push_back({p.x, p.y});
  if (!artifacts.hull_polygon.empty()) {
    const auto& f = artifacts.hull_polygon.front();
    ring.push_back({f.x, f.y}); // close the ring
  }
  j["hull"] = {{"type", "Polygon"}, {"coordinates", nlohmann::json::array({ring})}};

  std::ofstream js(dir / "qc_summary.json", std::ios::trunc);
  if (!js) throw Error("cannot write " + (dir / "qc_summary.json").string());
  js << j.dump(2) << "\n";
}

} // namespace seiscurate::store
