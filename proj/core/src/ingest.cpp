#include "ubf/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "geojson.hpp"
#include "ubf/digest.hpp"
#include "ubf/errors.hpp"
#include "ubf/geometry.hpp"

namespace ubf {

namespace {

using geojson::ordered_json;

// Canonical byte key of a polygon: rings reoriented CCW and rotated to start
// at the lexicographically smallest vertex, holes sorted by start vertex.
// Exact-double comparison, per the dedup contract.
std::string polygon_dedup_key(const Polygon& poly) {
  const auto canonical_ring = [](Ring ring) {
    if (ring.vertices.size() >= 3 && ring_signed_area(ring) < 0.0) {
      std::reverse(ring.vertices.begin(), ring.vertices.end());
    }
    std::size_t start = 0;
    for (std::size_t i = 1; i < ring.vertices.size(); ++i) {
      const Point& a = ring.vertices[i];
      const Point& b = ring.vertices[start];
      if (a.x < b.x || (a.x == b.x && a.y < b.y)) start = i;
    }
    std::rotate(ring.vertices.begin(), ring.vertices.begin() + start, ring.vertices.end());
    return ring;
  };
  std::vector<Ring> rings;
  rings.push_back(canonical_ring(poly.outer));
  std::vector<Ring> holes;
  holes.reserve(poly.holes.size());
  for (const Ring& h : poly.holes) holes.push_back(canonical_ring(h));
  std::sort(holes.begin(), holes.end(), [](const Ring& a, const Ring& b) {
    if (a.vertices.empty() || b.vertices.empty()) return a.vertices.size() < b.vertices.size();
    const Point& pa = a.vertices.front();
    const Point& pb = b.vertices.front();
    return pa.x < pb.x || (pa.x == pb.x && pa.y < pb.y);
  });
  rings.insert(rings.end(), holes.begin(), holes.end());

  std::string key;
  for (const Ring& r : rings) {
    for (const Point& p : r.vertices) {
      char buf[16];
      std::memcpy(buf, &p.x, 8);
      std::memcpy(buf + 8, &p.y, 8);
      key.append(buf, 16);
    }
    key.push_back('|');
  }
  return key;
}

std::optional<std::string> property_as_string(const ordered_json& props,
                                              const std::string& field) {
  if (!props.contains(field) || props[field].is_null()) return std::nullopt;
  const auto& v = props[field];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) {
    std::ostringstream os;
    os << v.get<double>();
    return os.str();
  }
  return std::nullopt;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  }
  return out;
}

bool parse_bool_text(const std::string& s) {
  return s == "true" || s == "1" || s == "yes";
}

struct PoiParseResult {
  std::vector<PoiRecord> pois;  // category mapped, classes assigned
};

void ingest_poi(const std::string& id, Point location, const std::string& category,
                bool high_level, std::optional<double> buffer_radius,
                const TaxonomyMap& taxonomy, const std::string& where,
                std::vector<PoiRecord>& out, IngestReport& report) {
  const CategoryMapping mapping = taxonomy.map_category(category);
  if (mapping.dropped()) {
    if (mapping.drop_reason == DropReason::Excluded) {
      report.pois_excluded_dropped++;
    } else {
      report.pois_unmapped_dropped++;
      report.issues.push_back(where + ": unmapped category '" + category + "' (poi " + id + ")");
    }
    return;
  }
  if (high_level && (!buffer_radius || !(*buffer_radius > 0.0) || !std::isfinite(*buffer_radius))) {
    report.pois_invalid_dropped++;
    report.issues.push_back(where + ": high-level poi " + id +
                            " lacks a positive buffer_radius");
    return;
  }
  PoiRecord rec;
  rec.id = id;
  rec.location = location;
  rec.raw_category = category;
  rec.function_class = *mapping.mapped;
  rec.is_high_level = high_level;
  if (high_level) rec.buffer_radius = buffer_radius;
  out.push_back(std::move(rec));
}

std::vector<PoiRecord> load_pois_geojson(const std::string& path, const TaxonomyMap& taxonomy,
                                         const FieldNames& fields, IngestReport& report) {
  const auto features = geojson::parse_feature_collection(geojson::read_file(path), path);
  std::vector<PoiRecord> out;
  out.reserve(features.size());
  std::size_t n = 0;
  for (const auto& f : features) {
    const std::string where = path + "#" + std::to_string(n++);
    if (!f.point) {
      report.pois_invalid_dropped++;
      report.issues.push_back(where + ": expected Point geometry, got '" + f.geometry_type + "'");
      continue;
    }
    const auto id = property_as_string(f.properties, fields.id);
    const auto category = property_as_string(f.properties, fields.category);
    if (!id || !category) {
      report.pois_invalid_dropped++;
      report.issues.push_back(where + ": missing id or category property");
      continue;
    }
    bool high_level = false;
    if (f.properties.contains(fields.high_level) && f.properties[fields.high_level].is_boolean()) {
      high_level = f.properties[fields.high_level].get<bool>();
    }
    std::optional<double> radius;
    if (f.properties.contains(fields.buffer_radius) &&
        f.properties[fields.buffer_radius].is_number()) {
      radius = f.properties[fields.buffer_radius].get<double>();
    }
    ingest_poi(*id, *f.point, *category, high_level, radius, taxonomy, where, out, report);
  }
  return out;
}

std::vector<PoiRecord> load_pois_csv(const std::string& path, const TaxonomyMap& taxonomy,
                                     const FieldNames& fields, IngestReport& report) {
  const std::string text = geojson::read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    raise(ErrorCode::ParseError, path + ": empty POI table");
  }
  const auto header = split_csv_line(line);
  const auto col = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int cx = col("x"), cy = col("y");
  const int cid = col(fields.id), ccat = col(fields.category);
  const int chl = col(fields.high_level), crad = col(fields.buffer_radius);
  if (cx < 0 || cy < 0 || cid < 0 || ccat < 0) {
    raise(ErrorCode::ParseError,
          path + ": POI table needs columns x, y, " + fields.id + ", " + fields.category);
  }
  std::vector<PoiRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto cells = split_csv_line(line);
    const auto cell = [&](int i) -> std::string {
      return (i >= 0 && i < static_cast<int>(cells.size())) ? cells[i] : std::string();
    };
    double x = 0, y = 0;
    try {
      x = std::stod(cell(cx));
      y = std::stod(cell(cy));
    } catch (const std::exception&) {
      report.pois_invalid_dropped++;
      report.issues.push_back(where + ": unparseable coordinates");
      continue;
    }
    const std::string id = cell(cid);
    const std::string category = cell(ccat);
    if (id.empty() || category.empty()) {
      report.pois_invalid_dropped++;
      report.issues.push_back(where + ": missing id or category");
      continue;
    }
    const bool high_level = chl >= 0 && parse_bool_text(cell(chl));
    std::optional<double> radius;
    if (crad >= 0 && !cell(crad).empty()) {
      try {
        radius = std::stod(cell(crad));
      } catch (const std::exception&) {
        radius = std::nullopt;
      }
    }
    ingest_poi(id, Point{x, y}, category, high_level, radius, taxonomy, where, out, report);
  }
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void apply_high_level_file(const std::string& path, std::vector<PoiRecord>& pois,
                           IngestReport& report) {
  const std::string text = geojson::read_file(path);
  std::istringstream in(text);
  std::string line;
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < pois.size(); ++i) by_id[pois[i].id] = i;
  std::vector<std::string> unknown;
  int lineno = 0;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (!header_skipped) {
      header_skipped = true;
      if (cells.size() >= 2 && cells[0] == "poi_id") continue;  // optional header
    }
    if (cells.size() < 2) {
      raise(ErrorCode::ParseError,
            path + ":" + std::to_string(lineno) + ": expected poi_id,radius");
    }
    double radius = 0.0;
    try {
      radius = std::stod(cells[1]);
    } catch (const std::exception&) {
      raise(ErrorCode::ParseError,
            path + ":" + std::to_string(lineno) + ": unparseable radius");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      raise(ErrorCode::InvalidHighLevelPoi,
            path + ":" + std::to_string(lineno) + ": radius must be > 0");
    }
    const auto it = by_id.find(cells[0]);
    if (it == by_id.end()) {
      if (unknown.size() < 20) unknown.push_back(cells[0]);
      continue;
    }
    pois[it->second].is_high_level = true;
    pois[it->second].buffer_radius = radius;
  }
  if (!unknown.empty()) {
    std::string msg = path + ": high-level entries reference unknown poi ids:";
    for (const auto& id : unknown) msg += " " + id;
    raise(ErrorCode::UnknownIds, msg);
  }
  (void)report;
}

std::vector<Block> load_user_blocks(const std::string& path, const FieldNames& fields,
                                    IngestReport& report) {
  const auto features = geojson::parse_feature_collection(geojson::read_file(path), path);
  std::vector<Block> blocks;
  std::set<std::string> seen_ids;
  std::size_t n = 0;
  for (const auto& f : features) {
    const std::string where = path + "#" + std::to_string(n++);
    if (!f.polygon) {
      raise(ErrorCode::ParseError, where + ": block feature is not a Polygon");
    }
    const auto id = property_as_string(f.properties, fields.id);
    if (!id) {
      raise(ErrorCode::ParseError, where + ": block feature lacks an id");
    }
    if (!seen_ids.insert(*id).second) {
      raise(ErrorCode::ParseError, where + ": duplicate block id '" + *id + "'");
    }
    validate_footprint_polygon(*f.polygon, where);
    Block b;
    b.id = *id;
    b.polygon = *f.polygon;
    blocks.push_back(std::move(b));
  }
  // Pairwise interior-overlap check, with a tolerance for shared edges.
  std::vector<std::string> offending;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (polygons_interior_overlap(blocks[i].polygon, blocks[j].polygon, 1e-9)) {
        offending.push_back(blocks[i].id + "/" + blocks[j].id);
      }
    }
  }
  if (!offending.empty()) {
    std::string msg = path + ": overlapping block polygons:";
    for (const auto& pair : offending) msg += " " + pair;
    raise(ErrorCode::OverlappingBlocks, msg);
  }
  report.blocks_loaded = static_cast<std::int64_t>(blocks.size());
  return blocks;
}

std::string ingest_params_json(const IngestConfig& config) {
  ordered_json j;
  j["block_grid_size"] = config.block_grid_size;
  j["user_blocks"] = !config.blocks_path.empty();
  j["fields"] = {{"id", config.fields.id},
                 {"category", config.fields.category},
                 {"high_level", config.fields.high_level},
                 {"buffer_radius", config.fields.buffer_radius},
                 {"block_id", config.fields.block_id}};
  return j.dump();
}

Polygon rect_polygon(double x0, double y0, double x1, double y1) {
  Polygon p;
  p.outer.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  return p;
}

}  // namespace

std::string IngestReport::to_text() const {
  std::ostringstream os;
  os << "ingest report\n";
  os << "buildings_kept: " << buildings_kept << "\n";
  os << "buildings_duplicate_dropped: " << buildings_duplicate_dropped << "\n";
  os << "buildings_invalid_dropped: " << buildings_invalid_dropped << "\n";
  os << "pois_kept: " << pois_kept << "\n";
  os << "pois_excluded_dropped: " << pois_excluded_dropped << "\n";
  os << "pois_unmapped_dropped: " << pois_unmapped_dropped << "\n";
  os << "pois_invalid_dropped: " << pois_invalid_dropped << "\n";
  os << "blocks_loaded: " << blocks_loaded << "\n";
  os << "high_level_pois: " << high_level_pois << "\n";
  os << "issues: " << issues.size() << "\n";
  for (const auto& issue : issues) os << "  - " << issue << "\n";
  return os.str();
}

Scene load_scene(const std::string& footprints_path, const std::string& pois_path,
                 const TaxonomyMap& taxonomy, const IngestConfig& config,
                 IngestReport* report_out) {
  IngestReport report;
  Scene scene;
  if (!(config.block_grid_size > 0.0) || !std::isfinite(config.block_grid_size)) {
    raise(ErrorCode::InvalidParams, "block_grid_size must be > 0");
  }

  // Buildings.
  {
    const std::string text = geojson::read_file(footprints_path);
    scene.provenance.footprints_digest = fnv1a64_hex(text);
    const auto features = geojson::parse_feature_collection(text, footprints_path);
    std::unordered_set<std::string> seen_geometry;
    std::unordered_set<std::string> seen_ids;
    std::size_t n = 0;
    for (const auto& f : features) {
      const std::string where = footprints_path + "#" + std::to_string(n++);
      if (!f.polygon) {
        report.buildings_invalid_dropped++;
        report.issues.push_back(where + ": expected Polygon geometry, got '" +
                                f.geometry_type + "'");
        continue;
      }
      const auto id = property_as_string(f.properties, config.fields.id);
      if (!id) {
        report.buildings_invalid_dropped++;
        report.issues.push_back(where + ": missing id property");
        continue;
      }
      try {
        validate_footprint_polygon(*f.polygon, where);
      } catch (const Error& e) {
        report.buildings_invalid_dropped++;
        report.issues.push_back(std::string(e.what()));
        continue;
      }
      if (!seen_geometry.insert(polygon_dedup_key(*f.polygon)).second) {
        report.buildings_duplicate_dropped++;
        continue;
      }
      if (!seen_ids.insert(*id).second) {
        report.buildings_invalid_dropped++;
        report.issues.push_back(where + ": duplicate building id '" + *id + "'");
        continue;
      }
      BuildingFootprint b;
      b.id = *id;
      b.polygon = std::move(*f.polygon);
      b.centroid = polygon_centroid(b.polygon);
      b.block_id = property_as_string(f.properties, config.fields.block_id);
      scene.buildings.push_back(std::move(b));
    }
  }
  if (scene.buildings.empty()) {
    raise(ErrorCode::EmptyScene, footprints_path + ": no valid buildings after ingest");
  }
  std::sort(scene.buildings.begin(), scene.buildings.end(),
            [](const BuildingFootprint& a, const BuildingFootprint& b) { return a.id < b.id; });
  report.buildings_kept = static_cast<std::int64_t>(scene.buildings.size());

  // POIs.
  {
    const std::string text = geojson::read_file(pois_path);
    scene.provenance.pois_digest = fnv1a64_hex(text);
    std::vector<PoiRecord> pois =
        ends_with(pois_path, ".csv")
            ? load_pois_csv(pois_path, taxonomy, config.fields, report)
            : load_pois_geojson(pois_path, taxonomy, config.fields, report);
    std::unordered_set<std::string> seen_ids;
    for (auto& p : pois) {
      if (!seen_ids.insert(p.id).second) {
        report.pois_invalid_dropped++;
        report.issues.push_back(pois_path + ": duplicate poi id '" + p.id + "'");
        continue;
      }
      scene.pois.push_back(std::move(p));
    }
  }
  if (!config.high_level_path.empty()) {
    apply_high_level_file(config.high_level_path, scene.pois, report);
  }
  std::sort(scene.pois.begin(), scene.pois.end(),
            [](const PoiRecord& a, const PoiRecord& b) { return a.id < b.id; });
  report.pois_kept = static_cast<std::int64_t>(scene.pois.size());
  for (const auto& p : scene.pois) {
    if (p.is_high_level) report.high_level_pois++;
  }

  // Blocks.
  scene.block_mode.grid_size = config.block_grid_size;
  scene.block_mode.user_blocks = !config.blocks_path.empty();
  if (scene.block_mode.user_blocks) {
    scene.provenance.blocks_digest = file_digest_hex(config.blocks_path);
    scene.blocks = load_user_blocks(config.blocks_path, config.fields, report);
    std::sort(scene.blocks.begin(), scene.blocks.end(),
              [](const Block& a, const Block& b) { return a.id < b.id; });
  }

  // Extent covers every geometry in the scene.
  BoundingBox ext{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  const auto extend_box = [&ext](const BoundingBox& b) {
    ext.min_x = std::min(ext.min_x, b.min_x);
    ext.min_y = std::min(ext.min_y, b.min_y);
    ext.max_x = std::max(ext.max_x, b.max_x);
    ext.max_y = std::max(ext.max_y, b.max_y);
  };
  for (const auto& b : scene.buildings) extend_box(bbox_of(b.polygon));
  for (const auto& p : scene.pois) extend_box({p.location.x, p.location.y, p.location.x, p.location.y});
  for (const auto& bl : scene.blocks) extend_box(bbox_of(bl.polygon));
  scene.extent = ext;

  scene.provenance.params_json = ingest_params_json(config);
  scene.poi_block.assign(scene.pois.size(), kNoBlock);
  scene.building_block.assign(scene.buildings.size(), kNoBlock);

  if (report_out) *report_out = report;
  return scene;
}

void compute_block_frequencies(Scene& scene) {
  const double g = scene.block_mode.grid_size;
  if (!(g > 0.0)) {
    raise(ErrorCode::InvalidParams, "block grid size must be > 0");
  }
  const double width = std::max(scene.extent.width(), 0.0);
  const double height = std::max(scene.extent.height(), 0.0);
  const int cols = std::max(1, static_cast<int>(std::ceil(width / g)));
  const int rows = std::max(1, static_cast<int>(std::ceil(height / g)));
  const auto cell_of = [&](Point p) {
    int c = static_cast<int>(std::floor((p.x - scene.extent.min_x) / g));
    int r = static_cast<int>(std::floor((p.y - scene.extent.min_y) / g));
    c = std::clamp(c, 0, cols - 1);
    r = std::clamp(r, 0, rows - 1);
    return std::pair<int, int>(r, c);
  };
  const auto cell_block_id = [&](const char* prefix, int r, int c) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s:%06d:%06d", prefix, r, c);
    return std::string(buf);
  };
  const auto cell_rect = [&](int r, int c) {
    const double x0 = scene.extent.min_x + c * g;
    const double y0 = scene.extent.min_y + r * g;
    return rect_polygon(x0, y0, x0 + g, y0 + g);
  };

  // Phase 1: route each POI to a block key.
  std::vector<std::string> poi_key(scene.pois.size());
  std::map<std::string, std::pair<int, int>> overflow_cells;  // id -> (r,c)

  if (!scene.block_mode.user_blocks) {
    for (std::size_t i = 0; i < scene.pois.size(); ++i) {
      const auto [r, c] = cell_of(scene.pois[i].location);
      poi_key[i] = cell_block_id("grid", r, c);
      overflow_cells.emplace(poi_key[i], std::pair<int, int>(r, c));
    }
    scene.blocks.clear();
  } else {
    // Clear any overflow blocks from a previous invocation; user blocks stay.
    std::erase_if(scene.blocks,
                  [](const Block& b) { return b.id.rfind("overflow:", 0) == 0; });
    for (std::size_t i = 0; i < scene.pois.size(); ++i) {
      const Point loc = scene.pois[i].location;
      std::string key;
      for (const Block& b : scene.blocks) {
        if (contains(b.polygon, loc)) {
          key = b.id;
          break;  // blocks are non-overlapping; boundary ties go to lowest id
        }
      }
      if (key.empty()) {
        const auto [r, c] = cell_of(loc);
        key = cell_block_id("overflow", r, c);
        overflow_cells.emplace(key, std::pair<int, int>(r, c));
      }
      poi_key[i] = std::move(key);
    }
  }

  for (const auto& [id, rc] : overflow_cells) {
    Block b;
    b.id = id;
    b.polygon = cell_rect(rc.first, rc.second);
    scene.blocks.push_back(std::move(b));
  }
  std::sort(scene.blocks.begin(), scene.blocks.end(),
            [](const Block& a, const Block& b) { return a.id < b.id; });

  std::unordered_map<std::string, std::uint32_t> block_index;
  block_index.reserve(scene.blocks.size());
  for (std::uint32_t i = 0; i < scene.blocks.size(); ++i) {
    scene.blocks[i].poi_counts = {};
    scene.blocks[i].total_pois = 0;
    block_index[scene.blocks[i].id] = i;
  }

  scene.poi_block.assign(scene.pois.size(), kNoBlock);
  for (std::size_t i = 0; i < scene.pois.size(); ++i) {
    const std::uint32_t bi = block_index.at(poi_key[i]);
    scene.poi_block[i] = bi;
    scene.blocks[bi].poi_counts[class_index(scene.pois[i].function_class)]++;
    scene.blocks[bi].total_pois++;
  }

  // Phase 2: block containing each building centroid.
  scene.building_block.assign(scene.buildings.size(), kNoBlock);
  for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
    const Point c = scene.buildings[i].centroid;
    if (!scene.block_mode.user_blocks) {
      const auto [r, col] = cell_of(c);
      const auto it = block_index.find(cell_block_id("grid", r, col));
      if (it != block_index.end()) scene.building_block[i] = it->second;
    } else {
      bool found = false;
      for (std::uint32_t bi = 0; bi < scene.blocks.size(); ++bi) {
        if (scene.blocks[bi].id.rfind("overflow:", 0) == 0) continue;
        if (contains(scene.blocks[bi].polygon, c)) {
          scene.building_block[i] = bi;
          found = true;
          break;
        }
      }
      if (!found) {
        const auto [r, col] = cell_of(c);
        const auto it = block_index.find(cell_block_id("overflow", r, col));
        if (it != block_index.end()) scene.building_block[i] = it->second;
      }
    }
  }

  scene.frequencies_computed = true;
}

}  // namespace ubf
