#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ubf/model.hpp"

namespace ubf {

// Sentinel for "centroid falls in no materialized block": all class
// frequencies are zero there, so every Eq-style category weight is 1.
inline constexpr std::uint32_t kNoBlock = 0xffffffffu;

struct BlockMode {
  double grid_size = 500.0;  // meters; grid cells double as overflow blocks
  bool user_blocks = false;

  bool operator==(const BlockMode&) const = default;
};

struct Provenance {
  std::string footprints_digest;
  std::string pois_digest;
  std::string blocks_digest;
  std::string taxonomy_digest;
  std::string params_json;  // canonical ingest-parameter snapshot

  bool operator==(const Provenance&) const = default;
};

// Validated, deduplicated, immutable-after-assembly feature set. Buildings,
// POIs, and blocks are sorted ascending by id, which is the ordering every
// downstream tie-break refers to.
struct Scene {
  std::vector<BuildingFootprint> buildings;
  std::vector<PoiRecord> pois;
  std::vector<Block> blocks;
  BoundingBox extent;
  BlockMode block_mode;
  Provenance provenance;

  bool frequencies_computed = false;
  std::vector<std::uint32_t> poi_block;       // parallel to pois
  std::vector<std::uint32_t> building_block;  // parallel to buildings

  bool operator==(const Scene&) const = default;
};

}  // namespace ubf
