// Copyright 2026 The TPE Pipeline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tpe/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace tpe {

using nlohmann::json;

// ---------------------------------------------------------------- files

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

// ---------------------------------------------------------------- scene JSON

namespace {

json polyline_to_json(const RailPolyline& poly) {
  json arr = json::array();
  for (const PolyPoint& p : poly.points) arr.push_back(json::array({p.x, p.y}));
  return arr;
}

RailPolyline polyline_from_json(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw ValidationError(what + ": expected an array of points");
  RailPolyline poly;
  for (const json& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ValidationError(what + ": each point must be [x, y]");
    poly.points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return poly;
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError(what + ": malformed JSON");
  return j;
}

}  // namespace

std::string encode_scene(const Scene& scene) {
  json j;
  j["width"] = scene.dims.width;
  j["height"] = scene.dims.height;
  j["tracks"] = json::array();
  for (const Track& t : scene.tracks) {
    json jt;
    jt["id"] = t.id;
    jt["left"] = polyline_to_json(t.left);
    jt["right"] = polyline_to_json(t.right);
    j["tracks"].push_back(jt);
  }
  return j.dump(2) + "\n";
}

Scene decode_scene(const std::string& json_text) {
  const json j = parse_json(json_text, "scene");
  Scene scene;
  if (!j.contains("width") || !j.contains("height") || !j.contains("tracks"))
    throw ValidationError("scene: missing width, height or tracks");
  scene.dims.width = j["width"].get<int>();
  scene.dims.height = j["height"].get<int>();
  for (const json& jt : j["tracks"]) {
    Track t;
    if (!jt.contains("id")) throw ValidationError("scene: track without id");
    t.id = jt["id"].get<int>();
    const std::string tag = "track " + std::to_string(t.id);
    if (!jt.contains("left") || !jt.contains("right"))
      throw ValidationError("scene: " + tag + " missing left or right rail");
    t.left = polyline_from_json(jt["left"], tag + " left rail");
    t.right = polyline_from_json(jt["right"], tag + " right rail");
    scene.tracks.push_back(std::move(t));
  }
  validate_scene(scene);
  return scene;
}

Scene load_scene(const std::filesystem::path& path) { return decode_scene(read_file(path)); }

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  atomic_write(path, encode_scene(scene));
}

// ---------------------------------------------------------------- TPEH binary

namespace {

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint16_t get_u16(const std::string& in, size_t off) {
  return static_cast<uint16_t>(static_cast<uint8_t>(in[off]) |
                               (static_cast<uint8_t>(in[off + 1]) << 8));
}

uint32_t get_u32(const std::string& in, size_t off) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(in[off + i])) << (8 * i);
  return v;
}

std::string encode_grid_header(const char* magic, const GridDims& dims) {
  std::string out(magic, 4);
  put_u16(out, 1);  // version
  put_u32(out, static_cast<uint32_t>(dims.width));
  put_u32(out, static_cast<uint32_t>(dims.height));
  return out;
}

GridDims decode_grid_header(const std::string& bytes, const char* magic, size_t payload_unit) {
  if (bytes.size() < 14) throw IoError("truncated header");
  if (std::memcmp(bytes.data(), magic, 4) != 0)
    throw IoError(std::string("bad magic, expected ") + magic);
  if (get_u16(bytes, 4) != 1) throw IoError("unsupported version");
  GridDims dims;
  dims.width = static_cast<int>(get_u32(bytes, 6));
  dims.height = static_cast<int>(get_u32(bytes, 10));
  if (dims.width < 1 || dims.height < 1) throw IoError("invalid dimensions");
  const size_t expected = 14 + payload_unit * static_cast<size_t>(dims.width) * dims.height;
  if (bytes.size() < expected) throw IoError("declared dims exceed payload");
  if (bytes.size() > expected) throw IoError("trailing bytes after payload");
  return dims;
}

}  // namespace

std::string encode_heatmap(const Heatmap& hm) {
  std::string out = encode_grid_header("TPEH", hm.dims());
  out.reserve(out.size() + hm.values().size() * 4);
  for (float f : hm.values()) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
  }
  return out;
}

Heatmap decode_heatmap(const std::string& bytes) {
  const GridDims dims = decode_grid_header(bytes, "TPEH", 4);
  Heatmap hm(dims);
  for (size_t i = 0; i < hm.values().size(); ++i) {
    const uint32_t bits = get_u32(bytes, 14 + 4 * i);
    float f;
    std::memcpy(&f, &bits, 4);
    if (!std::isfinite(f)) throw IoError("non-finite heatmap value at index " + std::to_string(i));
    hm.values()[i] = f;
  }
  return hm;
}

Heatmap load_heatmap(const std::filesystem::path& path) {
  return decode_heatmap(read_file(path));
}

void save_heatmap(const Heatmap& hm, const std::filesystem::path& path) {
  atomic_write(path, encode_heatmap(hm));
}

std::string encode_seg_mask(const SegMask& mask) {
  std::string out = encode_grid_header("TPES", mask.dims());
  out.append(reinterpret_cast<const char*>(mask.classes().data()), mask.classes().size());
  return out;
}

SegMask decode_seg_mask(const std::string& bytes) {
  const GridDims dims = decode_grid_header(bytes, "TPES", 1);
  SegMask mask(dims);
  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      const uint8_t c = static_cast<uint8_t>(bytes[14 + static_cast<size_t>(y) * dims.width + x]);
      if (c > 2) throw IoError("invalid class id " + std::to_string(c));
      mask.set(x, y, static_cast<SegClass>(c));
    }
  }
  return mask;
}

SegMask load_seg_mask(const std::filesystem::path& path) {
  return decode_seg_mask(read_file(path));
}

void save_seg_mask(const SegMask& mask, const std::filesystem::path& path) {
  atomic_write(path, encode_seg_mask(mask));
}

// ------------------------------------------------------------- paths document

namespace {

json triplet_to_json(const Triplet& t) {
  return json::array({t.y, t.x_left, t.x_center, t.x_right,
                      static_cast<int>(t.mode), t.clamped ? 1 : 0});
}

Triplet triplet_from_json(const json& a) {
  if (!a.is_array() || a.size() != 6) throw ValidationError("triplet: expected 6 fields");
  Triplet t;
  t.y = a[0].get<int>();
  t.x_left = a[1].get<double>();
  t.x_center = a[2].get<double>();
  t.x_right = a[3].get<double>();
  t.mode = static_cast<TripletMode>(a[4].get<int>());
  t.clamped = a[5].get<int>() != 0;
  return t;
}

json config_to_json(const PipelineConfig& c) {
  json j;
  j["nms_radius"] = c.peak.nms_radius;
  j["min_peak_value"] = c.peak.min_peak_value;
  j["subregion_height"] = c.cluster.subregion_height;
  j["tau_point"] = c.cluster.tau_point;
  j["tau_seg"] = c.tree.tau_seg;
  j["tau_start"] = c.tree.tau_start;
  j["max_row_gap_factor"] = c.tree.max_row_gap_factor;
  j["filter_min_rows"] = c.tree.filter_min_rows;
  j["filter_min_extent"] = c.tree.filter_min_extent;
  j["w_snap"] = c.snap.w_snap;
  j["enforce_monotone_width"] = c.snap.enforce_monotone_width;
  j["match_radius"] = c.match.radius;
  j["m_min"] = c.match.m_min;
  j["fit_degree"] = c.fit_degree;
  return j;
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  if (j.contains("nms_radius")) c.peak.nms_radius = j["nms_radius"].get<int>();
  if (j.contains("min_peak_value")) c.peak.min_peak_value = j["min_peak_value"].get<double>();
  if (j.contains("subregion_height")) c.cluster.subregion_height = j["subregion_height"].get<int>();
  if (j.contains("tau_point")) c.cluster.tau_point = j["tau_point"].get<double>();
  if (j.contains("tau_seg")) c.tree.tau_seg = j["tau_seg"].get<double>();
  if (j.contains("tau_start")) c.tree.tau_start = j["tau_start"].get<double>();
  if (j.contains("max_row_gap_factor")) c.tree.max_row_gap_factor = j["max_row_gap_factor"].get<int>();
  if (j.contains("filter_min_rows")) c.tree.filter_min_rows = j["filter_min_rows"].get<int>();
  if (j.contains("filter_min_extent")) c.tree.filter_min_extent = j["filter_min_extent"].get<double>();
  if (j.contains("w_snap")) c.snap.w_snap = j["w_snap"].get<int>();
  if (j.contains("enforce_monotone_width"))
    c.snap.enforce_monotone_width = j["enforce_monotone_width"].get<bool>();
  if (j.contains("match_radius")) c.match.radius = j["match_radius"].get<double>();
  if (j.contains("m_min")) c.match.m_min = j["m_min"].get<double>();
  if (j.contains("fit_degree")) c.fit_degree = j["fit_degree"].get<int>();
  return c;
}

const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::kStart: return "start";
    case NodeKind::kSwitch: return "switch";
    case NodeKind::kEnd: return "end";
  }
  return "?";
}

NodeKind node_kind_from_name(const std::string& s) {
  if (s == "start") return NodeKind::kStart;
  if (s == "switch") return NodeKind::kSwitch;
  if (s == "end") return NodeKind::kEnd;
  throw ValidationError("unknown node kind: " + s);
}

}  // namespace

std::string encode_paths_document(const PathsDocument& doc) {
  json j;
  j["width"] = doc.dims.width;
  j["height"] = doc.dims.height;
  j["config"] = config_to_json(doc.config);

  json nodes = json::array();
  for (const PathNode& n : doc.tree.nodes) {
    json jn;
    jn["id"] = n.id;
    jn["kind"] = node_kind_name(n.kind);
    jn["x"] = n.x;
    jn["y"] = n.y;
    jn["merge_suspected"] = n.merge_suspected;
    nodes.push_back(jn);
  }
  json edges = json::array();
  for (const PathEdge& e : doc.tree.edges) {
    json je;
    je["id"] = e.id;
    je["parent"] = e.parent_node;
    je["child"] = e.child_node;
    je["trajectory"] = json::array();
    for (const Triplet& t : e.trajectory) je["trajectory"].push_back(triplet_to_json(t));
    edges.push_back(je);
  }
  j["tree"] = {{"nodes", nodes}, {"edges", edges}};

  json paths = json::array();
  for (const EgoPath& p : doc.paths) {
    json jp;
    jp["edges"] = p.edge_ids;
    jp["triplets"] = json::array();
    for (const Triplet& t : p.triplets) jp["triplets"].push_back(triplet_to_json(t));
    paths.push_back(jp);
  }
  j["paths"] = paths;

  json fits = json::array();
  for (const FittedPath& f : doc.fits) {
    json jf;
    jf["degree"] = f.degree;
    jf["y_min"] = f.y_min;
    jf["y_max"] = f.y_max;
    jf["left"] = f.left_coeffs;
    jf["right"] = f.right_coeffs;
    fits.push_back(jf);
  }
  j["fits"] = fits;
  return j.dump(2) + "\n";
}

PathsDocument decode_paths_document(const std::string& json_text) {
  const json j = parse_json(json_text, "paths document");
  PathsDocument doc;
  doc.dims.width = j.at("width").get<int>();
  doc.dims.height = j.at("height").get<int>();
  doc.config = config_from_json(j.at("config"));
  for (const json& jn : j.at("tree").at("nodes")) {
    PathNode n;
    n.id = jn.at("id").get<int>();
    n.kind = node_kind_from_name(jn.at("kind").get<std::string>());
    n.x = jn.at("x").get<double>();
    n.y = jn.at("y").get<double>();
    n.merge_suspected = jn.value("merge_suspected", false);
    doc.tree.nodes.push_back(n);
  }
  for (const json& je : j.at("tree").at("edges")) {
    PathEdge e;
    e.id = je.at("id").get<int>();
    e.parent_node = je.at("parent").get<int>();
    e.child_node = je.at("child").get<int>();
    for (const json& jt : je.at("trajectory")) e.trajectory.push_back(triplet_from_json(jt));
    doc.tree.edges.push_back(std::move(e));
  }
  for (const json& jp : j.at("paths")) {
    EgoPath p;
    p.edge_ids = jp.at("edges").get<std::vector<int>>();
    for (const json& jt : jp.at("triplets")) p.triplets.push_back(triplet_from_json(jt));
    doc.paths.push_back(std::move(p));
  }
  for (const json& jf : j.at("fits")) {
    FittedPath f;
    f.degree = jf.at("degree").get<int>();
    f.y_min = jf.at("y_min").get<double>();
    f.y_max = jf.at("y_max").get<double>();
    f.left_coeffs = jf.at("left").get<std::vector<double>>();
    f.right_coeffs = jf.at("right").get<std::vector<double>>();
    doc.fits.push_back(std::move(f));
  }
  return doc;
}

PathsDocument load_paths_document(const std::filesystem::path& path) {
  return decode_paths_document(read_file(path));
}

void save_paths_document(const PathsDocument& doc, const std::filesystem::path& path) {
  atomic_write(path, encode_paths_document(doc));
}

// ------------------------------------------------------------- metrics report

MatchStats micro_average(const std::vector<MatchStats>& stats) {
  long long tp = 0, fp = 0, fn = 0;
  for (const MatchStats& s : stats) {
    tp += s.tp;
    fp += s.fp;
    fn += s.fn;
  }
  return finalize_stats(tp, fp, fn);
}

namespace {

json stats_to_json(const MatchStats& s) {
  json j;
  j["tp"] = s.tp;
  j["fp"] = s.fp;
  j["fn"] = s.fn;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  return j;
}

json macro_to_json(const std::vector<MatchStats>& stats) {
  json j;
  double p = 0.0, r = 0.0, f = 0.0;
  for (const MatchStats& s : stats) {
    p += s.precision;
    r += s.recall;
    f += s.f1;
  }
  const double n = stats.empty() ? 1.0 : static_cast<double>(stats.size());
  j["precision"] = p / n;
  j["recall"] = r / n;
  j["f1"] = f / n;
  return j;
}

}  // namespace

std::string encode_metrics_report(const MetricsReport& report) {
  json j;
  j["config"] = {{"match_radius", report.config.radius}, {"m_min", report.config.m_min}};

  std::vector<MatchStats> tp_pixel, all_pixel, path_level;
  double miou_sum = 0.0;
  int miou_count = 0;
  json rows = json::array();
  for (const ImageMetrics& m : report.per_image) {
    json row;
    row["name"] = m.name;
    row["tp_pixel"] = stats_to_json(m.tp_pixel);
    row["all_pixel"] = stats_to_json(m.all_pixel);
    row["path_level"] = stats_to_json(m.path_level);
    row["matched_pairs"] = m.matched_pairs;
    if (m.miou >= 0.0) {
      row["miou"] = m.miou;
      miou_sum += m.miou;
      ++miou_count;
    }
    rows.push_back(row);
    tp_pixel.push_back(m.tp_pixel);
    all_pixel.push_back(m.all_pixel);
    path_level.push_back(m.path_level);
  }
  j["per_image"] = rows;
  j["micro"] = {{"tp_pixel", stats_to_json(micro_average(tp_pixel))},
                {"all_pixel", stats_to_json(micro_average(all_pixel))},
                {"path_level", stats_to_json(micro_average(path_level))}};
  j["macro"] = {{"tp_pixel", macro_to_json(tp_pixel)},
                {"all_pixel", macro_to_json(all_pixel)},
                {"path_level", macro_to_json(path_level)}};
  if (miou_count > 0) j["miou_mean"] = miou_sum / miou_count;
  return j.dump(2) + "\n";
}

void save_metrics_report(const MetricsReport& report, const std::filesystem::path& path) {
  atomic_write(path, encode_metrics_report(report));
}

}  // namespace tpe
