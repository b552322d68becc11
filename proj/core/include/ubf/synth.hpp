#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ubf/model.hpp"
#include "ubf/scene.hpp"

namespace ubf {

struct ZoneSpec {
  BoundingBox rect;
  FunctionClass truth = FunctionClass::Residential;

  bool operator==(const ZoneSpec&) const = default;
};

struct HighLevelSpec {
  int zone = 0;
  FunctionClass cls = FunctionClass::Commercial;
  double radius = 200.0;

  bool operator==(const HighLevelSpec&) const = default;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  std::vector<ZoneSpec> zones;
  int buildings_per_zone = 25;
  // Mean of the per-building POI count: floor(mean), bumped by one with
  // probability frac(mean). A mean of 1.0 yields exactly one POI each.
  double pois_per_building = 1.0;
  double poi_noise_rate = 0.0;  // fraction of POIs flipped to a wrong class
  double poi_jitter = 0.0;      // uniform offset in [-j, j]^2 around the centroid
  std::vector<HighLevelSpec> high_level;
  double block_grid_size = 500.0;

  bool operator==(const SynthConfig&) const = default;
};

struct GroundTruth {
  std::map<std::string, FunctionClass> labels;  // building_id -> truth
};

// Deterministic synthetic city: per zone, a square grid of rectangular
// footprints, each seeded with POIs of the zone's class (optionally
// noise-flipped and jittered). All randomness comes from SplitMix64 on the
// config seed in a fixed draw order, so the same config reproduces the same
// scene on any platform.
std::pair<Scene, GroundTruth> generate_scene(const SynthConfig& config);

std::string ground_truth_to_csv(const GroundTruth& truth);
GroundTruth ground_truth_from_csv(const std::string& text);

// JSON codec for the synth CLI subcommand.
SynthConfig synth_config_from_json(const std::string& text);
std::string synth_config_to_json(const SynthConfig& config);

// Source-taxonomy category name that the default TaxonomyMap maps to cls.
std::string_view canonical_raw_category(FunctionClass cls);

}  // namespace ubf
