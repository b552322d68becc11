#include "ubf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "geojson.hpp"
#include "ubf/digest.hpp"
#include "ubf/errors.hpp"
#include "ubf/geometry.hpp"
#include "ubf/rng.hpp"

namespace ubf {

namespace {

using geojson::ordered_json;

void validate_config(const SynthConfig& c) {
  if (c.zones.empty()) {
    raise(ErrorCode::InvalidLayout, "synth config needs at least one zone");
  }
  for (const ZoneSpec& z : c.zones) {
    if (!(z.rect.width() > 0.0) || !(z.rect.height() > 0.0)) {
      raise(ErrorCode::InvalidLayout, "zone rectangles must have positive extent");
    }
  }
  for (std::size_t i = 0; i < c.zones.size(); ++i) {
    for (std::size_t j = i + 1; j < c.zones.size(); ++j) {
      const BoundingBox& a = c.zones[i].rect;
      const BoundingBox& b = c.zones[j].rect;
      const bool overlap = a.min_x < b.max_x && b.min_x < a.max_x &&
                           a.min_y < b.max_y && b.min_y < a.max_y;
      if (overlap) {
        raise(ErrorCode::InvalidLayout,
              "zones " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
  }
  if (c.buildings_per_zone < 1) {
    raise(ErrorCode::InvalidLayout, "buildings_per_zone must be >= 1");
  }
  if (!(c.pois_per_building >= 0.0)) {
    raise(ErrorCode::InvalidLayout, "pois_per_building must be >= 0");
  }
  if (!(c.poi_noise_rate >= 0.0 && c.poi_noise_rate < 1.0)) {
    raise(ErrorCode::InvalidLayout, "poi_noise_rate must lie in [0, 1)");
  }
  if (!(c.poi_jitter >= 0.0)) {
    raise(ErrorCode::InvalidLayout, "poi_jitter must be >= 0");
  }
  for (const HighLevelSpec& hl : c.high_level) {
    if (hl.zone < 0 || hl.zone >= static_cast<int>(c.zones.size())) {
      raise(ErrorCode::InvalidLayout, "high_level zone index out of range");
    }
    if (!(hl.radius > 0.0)) {
      raise(ErrorCode::InvalidLayout, "high_level radius must be > 0");
    }
  }
  if (!(c.block_grid_size > 0.0)) {
    raise(ErrorCode::InvalidLayout, "block_grid_size must be > 0");
  }
}

std::string padded_id(char prefix, std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%07zu", prefix, n);
  return std::string(buf);
}

}  // namespace

std::string_view canonical_raw_category(FunctionClass cls) {
  switch (cls) {
    case FunctionClass::Residential: return "Real Estate";
    case FunctionClass::Commercial: return "Shopping";
    case FunctionClass::PublicServices: return "Healthcare";
    case FunctionClass::TechnologyIndustry: return "Companies and Enterprises";
    case FunctionClass::EducationalCultural: return "Education and Training Venue";
  }
  return "Real Estate";
}

std::pair<Scene, GroundTruth> generate_scene(const SynthConfig& config) {
  validate_config(config);
  SplitMix64 rng(config.seed);

  Scene scene;
  GroundTruth truth;
  scene.block_mode.grid_size = config.block_grid_size;
  scene.block_mode.user_blocks = false;

  const int per_side = static_cast<int>(
      std::ceil(std::sqrt(static_cast<double>(config.buildings_per_zone))));
  const int whole_pois = static_cast<int>(std::floor(config.pois_per_building));
  const double extra_poi_p = config.pois_per_building - whole_pois;

  std::size_t building_counter = 0;
  std::size_t poi_counter = 0;
  for (std::size_t zi = 0; zi < config.zones.size(); ++zi) {
    const ZoneSpec& zone = config.zones[zi];
    const double cell_w = zone.rect.width() / per_side;
    const double cell_h = zone.rect.height() / per_side;
    for (int i = 0; i < config.buildings_per_zone; ++i) {
      const int row = i / per_side;
      const int col = i % per_side;
      const double cx = zone.rect.min_x + (col + 0.5) * cell_w;
      const double cy = zone.rect.min_y + (row + 0.5) * cell_h;
      const double half_w = 0.25 * cell_w;
      const double half_h = 0.25 * cell_h;

      BuildingFootprint b;
      b.id = padded_id('b', building_counter++);
      b.polygon.outer.vertices = {{cx - half_w, cy - half_h},
                                  {cx + half_w, cy - half_h},
                                  {cx + half_w, cy + half_h},
                                  {cx - half_w, cy + half_h}};
      b.centroid = polygon_centroid(b.polygon);
      truth.labels[b.id] = zone.truth;
      scene.buildings.push_back(std::move(b));

      // Fixed draw order per POI: count bump, noise flip, wrong class,
      // jitter dx, jitter dy.
      int count = whole_pois;
      if (extra_poi_p > 0.0 && rng.next_double() < extra_poi_p) ++count;
      for (int p = 0; p < count; ++p) {
        FunctionClass cls = zone.truth;
        if (config.poi_noise_rate > 0.0 && rng.next_double() < config.poi_noise_rate) {
          // Uniform over the four wrong classes.
          int wrong = static_cast<int>(rng.next_below(kNumClasses - 1));
          if (wrong >= class_index(zone.truth)) ++wrong;
          cls = static_cast<FunctionClass>(wrong + 1);
        }
        double dx = 0.0, dy = 0.0;
        if (config.poi_jitter > 0.0) {
          dx = rng.next_range(-config.poi_jitter, config.poi_jitter);
          dy = rng.next_range(-config.poi_jitter, config.poi_jitter);
        }
        PoiRecord poi;
        poi.id = padded_id('p', poi_counter++);
        poi.location = {cx + dx, cy + dy};
        poi.raw_category = std::string(canonical_raw_category(cls));
        poi.function_class = cls;
        scene.pois.push_back(std::move(poi));
      }
    }
  }

  for (const HighLevelSpec& hl : config.high_level) {
    const BoundingBox& r = config.zones[hl.zone].rect;
    PoiRecord poi;
    poi.id = padded_id('p', poi_counter++);
    poi.location = {(r.min_x + r.max_x) / 2.0, (r.min_y + r.max_y) / 2.0};
    poi.raw_category = std::string(canonical_raw_category(hl.cls));
    poi.function_class = hl.cls;
    poi.is_high_level = true;
    poi.buffer_radius = hl.radius;
    scene.pois.push_back(std::move(poi));
  }

  BoundingBox ext{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (const auto& b : scene.buildings) {
    const BoundingBox box = bbox_of(b.polygon);
    ext.min_x = std::min(ext.min_x, box.min_x);
    ext.min_y = std::min(ext.min_y, box.min_y);
    ext.max_x = std::max(ext.max_x, box.max_x);
    ext.max_y = std::max(ext.max_y, box.max_y);
  }
  for (const auto& p : scene.pois) {
    ext.min_x = std::min(ext.min_x, p.location.x);
    ext.min_y = std::min(ext.min_y, p.location.y);
    ext.max_x = std::max(ext.max_x, p.location.x);
    ext.max_y = std::max(ext.max_y, p.location.y);
  }
  scene.extent = ext;
  scene.provenance.params_json = synth_config_to_json(config);
  scene.poi_block.assign(scene.pois.size(), kNoBlock);
  scene.building_block.assign(scene.buildings.size(), kNoBlock);
  return {std::move(scene), std::move(truth)};
}

std::string ground_truth_to_csv(const GroundTruth& truth) {
  std::ostringstream os;
  os << "building_id,function_class\n";
  for (const auto& [id, cls] : truth.labels) {
    os << id << "," << class_name(cls) << "\n";
  }
  return os.str();
}

GroundTruth ground_truth_from_csv(const std::string& text) {
  GroundTruth truth;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || lineno == 1) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      raise(ErrorCode::ParseError, "ground truth line " + std::to_string(lineno) +
                                       ": expected building_id,function_class");
    }
    const auto cls = class_from_string(line.substr(comma + 1));
    if (!cls) {
      raise(ErrorCode::ParseError,
            "ground truth line " + std::to_string(lineno) + ": unknown class");
    }
    truth.labels[line.substr(0, comma)] = *cls;
  }
  return truth;
}

namespace {

BoundingBox rect_from_json(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.size() != 4) {
    raise(ErrorCode::ConfigError, std::string(what) + " must be [min_x,min_y,max_x,max_y]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

FunctionClass class_from_json(const ordered_json& j, const char* what) {
  if (j.is_string()) {
    if (auto c = class_from_string(j.get<std::string>())) return *c;
  } else if (j.is_number_integer()) {
    const int v = j.get<int>();
    if (v >= 1 && v <= kNumClasses) return static_cast<FunctionClass>(v);
  }
  raise(ErrorCode::ConfigError, std::string(what) + ": unknown function class");
}

}  // namespace

SynthConfig synth_config_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    raise(ErrorCode::ConfigError, std::string("synth config: invalid JSON: ") + e.what());
  }
  SynthConfig c;
  c.seed = doc.value("seed", std::uint64_t{1});
  if (!doc.contains("zones") || !doc["zones"].is_array()) {
    raise(ErrorCode::ConfigError, "synth config needs a zones array");
  }
  for (const auto& z : doc["zones"]) {
    ZoneSpec spec;
    spec.rect = rect_from_json(z.value("rect", ordered_json::array()), "zone rect");
    spec.truth = class_from_json(z.contains("class") ? z["class"] : ordered_json(), "zone class");
    c.zones.push_back(spec);
  }
  c.buildings_per_zone = doc.value("buildings_per_zone", 25);
  c.pois_per_building = doc.value("pois_per_building", 1.0);
  c.poi_noise_rate = doc.value("poi_noise_rate", 0.0);
  c.poi_jitter = doc.value("poi_jitter", 0.0);
  c.block_grid_size = doc.value("block_grid_size", 500.0);
  if (doc.contains("high_level")) {
    for (const auto& hl : doc["high_level"]) {
      HighLevelSpec spec;
      spec.zone = hl.value("zone", 0);
      spec.cls = class_from_json(hl.contains("class") ? hl["class"] : ordered_json(),
                                 "high_level class");
      spec.radius = hl.value("radius", 200.0);
      c.high_level.push_back(spec);
    }
  }
  return c;
}

std::string synth_config_to_json(const SynthConfig& c) {
  ordered_json doc;
  doc["seed"] = c.seed;
  doc["zones"] = ordered_json::array();
  for (const ZoneSpec& z : c.zones) {
    ordered_json zj;
    zj["rect"] = {z.rect.min_x, z.rect.min_y, z.rect.max_x, z.rect.max_y};
    zj["class"] = std::string(class_name(z.truth));
    doc["zones"].push_back(zj);
  }
  doc["buildings_per_zone"] = c.buildings_per_zone;
  doc["pois_per_building"] = c.pois_per_building;
  doc["poi_noise_rate"] = c.poi_noise_rate;
  doc["poi_jitter"] = c.poi_jitter;
  doc["block_grid_size"] = c.block_grid_size;
  doc["high_level"] = ordered_json::array();
  for (const HighLevelSpec& hl : c.high_level) {
    ordered_json hj;
    hj["zone"] = hl.zone;
    hj["class"] = std::string(class_name(hl.cls));
    hj["radius"] = hl.radius;
    doc["high_level"].push_back(hj);
  }
  return doc.dump();
}

}  // namespace ubf
