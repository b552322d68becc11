#pragma once

// Internal GeoJSON helpers. Not installed; nlohmann/json stays out of the
// public headers.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ubf/model.hpp"

namespace ubf::geojson {

using ordered_json = nlohmann::ordered_json;

struct Feature {
  std::optional<Polygon> polygon;
  std::optional<Point> point;
  std::string geometry_type;  // as found in the file
  ordered_json properties;
};

// Parses a FeatureCollection. Geometry parse problems per feature are
// recorded in the feature (both optionals empty) rather than thrown, so
// ingest can keep going. Throws ParseError for non-GeoJSON documents.
std::vector<Feature> parse_feature_collection(const std::string& text,
                                              const std::string& origin);

ordered_json polygon_coordinates(const Polygon& poly);
ordered_json point_coordinates(Point p);

// Feature assembly used by the writers.
ordered_json make_feature(const ordered_json& geometry, ordered_json properties);
std::string collection_to_string(const std::vector<ordered_json>& features);

std::string read_file(const std::string& path);         // IoError on failure
void write_file(const std::string& path, const std::string& content);

}  // namespace ubf::geojson
