#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ubf/model.hpp"
#include "ubf/scene.hpp"

namespace ubf {

struct FieldNames {
  std::string id = "id";
  std::string category = "category";
  std::string high_level = "high_level";
  std::string buffer_radius = "buffer_radius";
  std::string block_id = "block_id";

  bool operator==(const FieldNames&) const = default;
};

struct IngestConfig {
  double block_grid_size = 500.0;  // meters
  std::string blocks_path;         // optional GeoJSON of block polygons
  std::string high_level_path;     // optional CSV poi_id,radius
  FieldNames fields;

  bool operator==(const IngestConfig&) const = default;
};

struct IngestReport {
  std::int64_t buildings_kept = 0;
  std::int64_t buildings_duplicate_dropped = 0;
  std::int64_t buildings_invalid_dropped = 0;
  std::int64_t pois_kept = 0;
  std::int64_t pois_excluded_dropped = 0;
  std::int64_t pois_unmapped_dropped = 0;
  std::int64_t pois_invalid_dropped = 0;
  std::int64_t blocks_loaded = 0;
  std::int64_t high_level_pois = 0;
  std::vector<std::string> issues;  // per-record messages, input order

  // Plain text, stable key order.
  std::string to_text() const;
};

// Loads, validates, deduplicates, maps categories, and assembles the scene.
// Malformed records are collected into the report and skipped; hard errors
// (unreadable file, zero valid buildings, overlapping user blocks) throw.
Scene load_scene(const std::string& footprints_path, const std::string& pois_path,
                 const TaxonomyMap& taxonomy, const IngestConfig& config,
                 IngestReport* report = nullptr);

// Assigns every POI to exactly one block, fills per-block class counts, and
// resolves the block containing each building centroid. Grid mode
// materializes the non-empty grid cells; user-block mode routes POIs outside
// every block polygon to per-grid-cell overflow blocks.
void compute_block_frequencies(Scene& scene);

}  // namespace ubf
