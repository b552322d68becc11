#include "ubf/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "geojson.hpp"
#include "ubf/errors.hpp"

namespace ubf {

namespace {

using geojson::ordered_json;

ordered_json point_json(Point p) { return ordered_json::array({p.x, p.y}); }

Point point_from(const ordered_json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

ordered_json ring_json(const Ring& r) {
  ordered_json arr = ordered_json::array();
  for (const Point& p : r.vertices) arr.push_back(point_json(p));
  return arr;
}

Ring ring_from(const ordered_json& j) {
  Ring r;
  for (const auto& p : j) r.vertices.push_back(point_from(p));
  return r;
}

ordered_json polygon_json(const Polygon& poly) {
  ordered_json j;
  j["outer"] = ring_json(poly.outer);
  j["holes"] = ordered_json::array();
  for (const Ring& h : poly.holes) j["holes"].push_back(ring_json(h));
  return j;
}

Polygon polygon_from(const ordered_json& j) {
  Polygon poly;
  poly.outer = ring_from(j.at("outer"));
  for (const auto& h : j.at("holes")) poly.holes.push_back(ring_from(h));
  return poly;
}

ordered_json building_json(const BuildingFootprint& b) {
  ordered_json j;
  j["id"] = b.id;
  j["polygon"] = polygon_json(b.polygon);
  j["centroid"] = point_json(b.centroid);
  if (b.block_id) {
    j["block_id"] = *b.block_id;
  } else {
    j["block_id"] = nullptr;
  }
  return j;
}

BuildingFootprint building_from(const ordered_json& j) {
  BuildingFootprint b;
  b.id = j.at("id").get<std::string>();
  b.polygon = polygon_from(j.at("polygon"));
  b.centroid = point_from(j.at("centroid"));
  if (j.contains("block_id") && !j["block_id"].is_null()) {
    b.block_id = j["block_id"].get<std::string>();
  }
  return b;
}

ordered_json poi_json(const PoiRecord& p) {
  ordered_json j;
  j["id"] = p.id;
  j["xy"] = point_json(p.location);
  j["category"] = p.raw_category;
  j["class"] = class_encoding(p.function_class);
  j["high_level"] = p.is_high_level;
  if (p.buffer_radius) {
    j["buffer_radius"] = *p.buffer_radius;
  } else {
    j["buffer_radius"] = nullptr;
  }
  return j;
}

PoiRecord poi_from(const ordered_json& j) {
  PoiRecord p;
  p.id = j.at("id").get<std::string>();
  p.location = point_from(j.at("xy"));
  p.raw_category = j.at("category").get<std::string>();
  p.function_class = class_from_encoding(j.at("class").get<int>());
  p.is_high_level = j.at("high_level").get<bool>();
  if (j.contains("buffer_radius") && !j["buffer_radius"].is_null()) {
    p.buffer_radius = j["buffer_radius"].get<double>();
  }
  return p;
}

ordered_json block_json(const Block& b) {
  ordered_json j;
  j["id"] = b.id;
  j["polygon"] = polygon_json(b.polygon);
  j["counts"] = b.poi_counts;
  j["total"] = b.total_pois;
  return j;
}

Block block_from(const ordered_json& j) {
  Block b;
  b.id = j.at("id").get<std::string>();
  b.polygon = polygon_from(j.at("polygon"));
  const auto& counts = j.at("counts");
  for (int c = 0; c < kNumClasses; ++c) b.poi_counts[c] = counts.at(c).get<std::int64_t>();
  b.total_pois = j.at("total").get<std::int64_t>();
  return b;
}

ordered_json label_state_json(const LabelState& ls) {
  ordered_json j;
  j["building_id"] = ls.building_id;
  j["label"] = ls.label ? class_encoding(*ls.label) : 0;
  j["stage"] = static_cast<int>(ls.stage);
  if (ls.score_vector) {
    j["scores"] = ls.score_vector->values;
  } else {
    j["scores"] = nullptr;
  }
  return j;
}

LabelState label_state_from(const ordered_json& j) {
  LabelState ls;
  ls.building_id = j.at("building_id").get<std::string>();
  const int enc = j.at("label").get<int>();
  if (enc != 0) ls.label = class_from_encoding(enc);
  ls.stage = static_cast<LabelStage>(j.at("stage").get<int>());
  if (j.contains("scores") && !j["scores"].is_null()) {
    ClassScores s;
    for (int c = 0; c < kNumClasses; ++c) s.values[c] = j["scores"].at(c).get<double>();
    ls.score_vector = s;
  }
  return ls;
}

ordered_json parse_json(const std::string& text, const char* what) {
  try {
    return ordered_json::parse(text);
  } catch (const std::exception& e) {
    raise(ErrorCode::ParseError, std::string(what) + ": invalid JSON: " + e.what());
  }
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
  ordered_json j;
  j["format"] = "ubf-scene-v1";
  j["extent"] = {scene.extent.min_x, scene.extent.min_y, scene.extent.max_x,
                 scene.extent.max_y};
  j["block_mode"] = {{"grid_size", scene.block_mode.grid_size},
                     {"user_blocks", scene.block_mode.user_blocks}};
  j["provenance"] = {{"footprints_digest", scene.provenance.footprints_digest},
                     {"pois_digest", scene.provenance.pois_digest},
                     {"blocks_digest", scene.provenance.blocks_digest},
                     {"taxonomy_digest", scene.provenance.taxonomy_digest},
                     {"params_json", scene.provenance.params_json}};
  j["frequencies_computed"] = scene.frequencies_computed;
  j["buildings"] = ordered_json::array();
  for (const auto& b : scene.buildings) j["buildings"].push_back(building_json(b));
  j["pois"] = ordered_json::array();
  for (const auto& p : scene.pois) j["pois"].push_back(poi_json(p));
  j["blocks"] = ordered_json::array();
  for (const auto& b : scene.blocks) j["blocks"].push_back(block_json(b));
  const auto index_array = [](const std::vector<std::uint32_t>& v) {
    ordered_json arr = ordered_json::array();
    for (std::uint32_t x : v) {
      if (x == kNoBlock) {
        arr.push_back(nullptr);
      } else {
        arr.push_back(x);
      }
    }
    return arr;
  };
  j["poi_block"] = index_array(scene.poi_block);
  j["building_block"] = index_array(scene.building_block);
  return j.dump(1) + "\n";
}

Scene scene_from_json(const std::string& text) {
  const ordered_json j = parse_json(text, "scene");
  if (!j.is_object() || j.value("format", "") != "ubf-scene-v1") {
    raise(ErrorCode::ParseError, "not a ubf scene file");
  }
  Scene scene;
  const auto& e = j.at("extent");
  scene.extent = {e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>(),
                  e.at(3).get<double>()};
  scene.block_mode.grid_size = j.at("block_mode").at("grid_size").get<double>();
  scene.block_mode.user_blocks = j.at("block_mode").at("user_blocks").get<bool>();
  const auto& prov = j.at("provenance");
  scene.provenance.footprints_digest = prov.at("footprints_digest").get<std::string>();
  scene.provenance.pois_digest = prov.at("pois_digest").get<std::string>();
  scene.provenance.blocks_digest = prov.at("blocks_digest").get<std::string>();
  scene.provenance.taxonomy_digest = prov.at("taxonomy_digest").get<std::string>();
  scene.provenance.params_json = prov.at("params_json").get<std::string>();
  scene.frequencies_computed = j.at("frequencies_computed").get<bool>();
  for (const auto& b : j.at("buildings")) scene.buildings.push_back(building_from(b));
  for (const auto& p : j.at("pois")) scene.pois.push_back(poi_from(p));
  for (const auto& b : j.at("blocks")) scene.blocks.push_back(block_from(b));
  const auto index_vector = [](const ordered_json& arr) {
    std::vector<std::uint32_t> v;
    v.reserve(arr.size());
    for (const auto& x : arr) {
      v.push_back(x.is_null() ? kNoBlock : x.get<std::uint32_t>());
    }
    return v;
  };
  scene.poi_block = index_vector(j.at("poi_block"));
  scene.building_block = index_vector(j.at("building_block"));
  return scene;
}

void save_scene_file(const Scene& scene, const std::string& path) {
  geojson::write_file(path, scene_to_json(scene));
}

Scene read_scene_file(const std::string& path) {
  return scene_from_json(geojson::read_file(path));
}

std::string labels_to_geojson(const Scene& scene, const std::vector<LabelState>& labels) {
  if (labels.size() != scene.buildings.size()) {
    raise(ErrorCode::InvalidParams, "labels do not parallel the scene's buildings");
  }
  std::vector<ordered_json> features;
  features.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const LabelState& ls = labels[i];
    ordered_json props;
    props["id"] = ls.building_id;
    props["label"] = ls.label ? std::string(class_name(*ls.label)) : "Unlabeled";
    props["stage"] = std::string(stage_name(ls.stage));
    const ClassScores scores = ls.score_vector.value_or(ClassScores{});
    for (int c = 0; c < kNumClasses; ++c) {
      props["s" + std::to_string(c + 1)] = scores.values[c];
    }
    ordered_json geometry;
    geometry["type"] = "Polygon";
    geometry["coordinates"] = geojson::polygon_coordinates(scene.buildings[i].polygon);
    features.push_back(geojson::make_feature(geometry, std::move(props)));
  }
  return geojson::collection_to_string(features);
}

namespace {

std::vector<LabelState> assemble_labels(
    const Scene& scene,
    const std::vector<std::pair<std::string, LabelState>>& parsed,
    const std::string& origin) {
  std::unordered_map<std::string, std::size_t> building_of;
  building_of.reserve(scene.buildings.size());
  for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
    building_of[scene.buildings[i].id] = i;
  }
  std::vector<LabelState> out(scene.buildings.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].building_id = scene.buildings[i].id;
    out[i].stage = LabelStage::External;
  }
  std::vector<std::string> unknown;
  for (const auto& [id, ls] : parsed) {
    const auto it = building_of.find(id);
    if (it == building_of.end()) {
      if (unknown.size() < 20) unknown.push_back(id);
      continue;
    }
    out[it->second] = ls;
  }
  if (!unknown.empty()) {
    std::string msg = origin + ": label file references unknown building ids:";
    for (const auto& id : unknown) msg += " " + id;
    raise(ErrorCode::UnknownIds, msg);
  }
  return out;
}

}  // namespace

std::vector<LabelState> labels_from_geojson(const Scene& scene, const std::string& text,
                                            const std::string& origin) {
  const auto features = geojson::parse_feature_collection(text, origin);
  std::vector<std::pair<std::string, LabelState>> parsed;
  parsed.reserve(features.size());
  for (const auto& f : features) {
    if (!f.properties.contains("id")) {
      raise(ErrorCode::ParseError, origin + ": label feature lacks an id property");
    }
    LabelState ls;
    ls.building_id = f.properties["id"].is_string()
                         ? f.properties["id"].get<std::string>()
                         : f.properties["id"].dump();
    const std::string label = f.properties.value("label", "Unlabeled");
    if (label != "Unlabeled") {
      const auto cls = class_from_string(label);
      if (!cls) {
        raise(ErrorCode::ParseError, origin + ": unknown label '" + label + "'");
      }
      ls.label = cls;
    }
    ls.stage = stage_from_string(f.properties.value("stage", "External"))
                   .value_or(LabelStage::External);
    if (f.properties.contains("s1")) {
      ClassScores s;
      for (int c = 0; c < kNumClasses; ++c) {
        s.values[c] = f.properties.value("s" + std::to_string(c + 1), 0.0);
      }
      ls.score_vector = s;
    }
    parsed.emplace_back(ls.building_id, std::move(ls));
  }
  return assemble_labels(scene, parsed, origin);
}

std::vector<LabelState> labels_from_csv(const Scene& scene, const std::string& text,
                                        const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    raise(ErrorCode::ParseError, origin + ": empty label table");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  int id_col = -1, label_col = -1;
  {
    std::istringstream hs(line);
    std::string cell;
    int i = 0;
    while (std::getline(hs, cell, ',')) {
      if (cell == "id" || cell == "building_id") id_col = i;
      if (cell == "label" || cell == "function_class") label_col = i;
      ++i;
    }
  }
  if (id_col < 0 || label_col < 0) {
    raise(ErrorCode::ParseError,
          origin + ": label table needs building_id and label columns");
  }
  std::vector<std::pair<std::string, LabelState>> parsed;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) <= std::max(id_col, label_col)) {
      raise(ErrorCode::ParseError, origin + ":" + std::to_string(lineno) + ": short row");
    }
    LabelState state;
    state.building_id = cells[id_col];
    state.stage = LabelStage::External;
    if (cells[label_col] != "Unlabeled") {
      const auto cls = class_from_string(cells[label_col]);
      if (!cls) {
        raise(ErrorCode::ParseError, origin + ":" + std::to_string(lineno) +
                                         ": unknown label '" + cells[label_col] + "'");
      }
      state.label = cls;
    }
    parsed.emplace_back(state.building_id, std::move(state));
  }
  return assemble_labels(scene, parsed, origin);
}

std::vector<LabelState> read_labels_file(const Scene& scene, const std::string& path) {
  const std::string text = geojson::read_file(path);
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return csv ? labels_from_csv(scene, text, path) : labels_from_geojson(scene, text, path);
}

std::string to_json_string(const BuildingFootprint& b) { return building_json(b).dump(); }
BuildingFootprint building_from_json_string(const std::string& text) {
  return building_from(parse_json(text, "building"));
}
std::string to_json_string(const PoiRecord& p) { return poi_json(p).dump(); }
PoiRecord poi_from_json_string(const std::string& text) {
  return poi_from(parse_json(text, "poi"));
}
std::string to_json_string(const Block& b) { return block_json(b).dump(); }
Block block_from_json_string(const std::string& text) {
  return block_from(parse_json(text, "block"));
}
std::string to_json_string(const LabelState& ls) { return label_state_json(ls).dump(); }
LabelState label_state_from_json_string(const std::string& text) {
  return label_state_from(parse_json(text, "label state"));
}

std::string taxonomy_to_tsv(const TaxonomyMap& taxonomy) {
  std::ostringstream os;
  for (const auto& [raw, cls] : taxonomy.entries()) {
    os << raw << "\t" << class_name(cls) << "\n";
  }
  for (const auto& raw : taxonomy.excluded()) {
    os << raw << "\tEXCLUDE\n";
  }
  return os.str();
}

std::string read_text_file(const std::string& path) { return geojson::read_file(path); }
void write_text_file(const std::string& path, const std::string& content) {
  geojson::write_file(path, content);
}

}  // namespace ubf
