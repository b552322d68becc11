#include "geojson.hpp"

#include <fstream>
#include <sstream>

#include "ubf/errors.hpp"

namespace ubf::geojson {

namespace {

std::optional<Point> parse_position(const ordered_json& j) {
  if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number()) {
    return std::nullopt;
  }
  return Point{j[0].get<double>(), j[1].get<double>()};
}

std::optional<Ring> parse_ring(const ordered_json& j) {
  if (!j.is_array()) return std::nullopt;
  Ring ring;
  ring.vertices.reserve(j.size());
  for (const auto& pos : j) {
    auto p = parse_position(pos);
    if (!p) return std::nullopt;
    ring.vertices.push_back(*p);
  }
  // GeoJSON closes rings by repeating the first vertex; store them open.
  while (ring.vertices.size() > 1 && ring.vertices.back() == ring.vertices.front()) {
    ring.vertices.pop_back();
  }
  return ring;
}

}  // namespace

std::vector<Feature> parse_feature_collection(const std::string& text,
                                              const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    raise(ErrorCode::ParseError, origin + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    raise(ErrorCode::ParseError, origin + ": expected a GeoJSON FeatureCollection");
  }
  std::vector<Feature> out;
  out.reserve(doc["features"].size());
  for (const auto& f : doc["features"]) {
    Feature rec;
    if (f.is_object() && f.contains("properties") && f["properties"].is_object()) {
      rec.properties = f["properties"];
    } else {
      rec.properties = ordered_json::object();
    }
    if (f.is_object() && f.contains("geometry") && f["geometry"].is_object()) {
      const auto& g = f["geometry"];
      rec.geometry_type = g.value("type", "");
      if (rec.geometry_type == "Point" && g.contains("coordinates")) {
        rec.point = parse_position(g["coordinates"]);
      } else if (rec.geometry_type == "Polygon" && g.contains("coordinates") &&
                 g["coordinates"].is_array() && !g["coordinates"].empty()) {
        Polygon poly;
        bool ok = true;
        for (std::size_t i = 0; i < g["coordinates"].size(); ++i) {
          auto ring = parse_ring(g["coordinates"][i]);
          if (!ring) {
            ok = false;
            break;
          }
          if (i == 0) {
            poly.outer = std::move(*ring);
          } else {
            poly.holes.push_back(std::move(*ring));
          }
        }
        if (ok) rec.polygon = std::move(poly);
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

ordered_json point_coordinates(Point p) { return ordered_json::array({p.x, p.y}); }

ordered_json polygon_coordinates(const Polygon& poly) {
  const auto ring_to_json = [](const Ring& r) {
    ordered_json arr = ordered_json::array();
    for (const Point& p : r.vertices) arr.push_back(ordered_json::array({p.x, p.y}));
    if (!r.vertices.empty()) {
      arr.push_back(ordered_json::array({r.vertices.front().x, r.vertices.front().y}));
    }
    return arr;
  };
  ordered_json coords = ordered_json::array();
  coords.push_back(ring_to_json(poly.outer));
  for (const Ring& h : poly.holes) coords.push_back(ring_to_json(h));
  return coords;
}

ordered_json make_feature(const ordered_json& geometry, ordered_json properties) {
  ordered_json f;
  f["type"] = "Feature";
  f["geometry"] = geometry;
  f["properties"] = std::move(properties);
  return f;
}

std::string collection_to_string(const std::vector<ordered_json>& features) {
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = features;
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    raise(ErrorCode::IoError, "cannot open file for writing: " + path);
  }
  out << content;
  if (!out) {
    raise(ErrorCode::IoError, "short write: " + path);
  }
}

}  // namespace ubf::geojson
