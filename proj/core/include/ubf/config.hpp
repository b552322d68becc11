#pragma once

#include <string>

#include "ubf/ingest.hpp"
#include "ubf/labeling.hpp"
#include "ubf/raster.hpp"

namespace ubf {

// One config file governs every parameter; CLI flags override fields after
// loading. The effective config is snapshotted into the run manifest.
struct RunConfig {
  struct Paths {
    std::string footprints;
    std::string pois;
    std::string taxonomy;    // empty: built-in default map
    std::string blocks;      // empty: grid blocks
    std::string high_level;  // empty: high-level flags come from the POI file

    bool operator==(const Paths&) const = default;
  } paths;

  IngestConfig ingest;
  Stage1Params stage1;
  Stage2Params stage2;
  CorrectionParams stage3;
  KdeParams kde;
  double w = 0.5;
  std::string output_dir = "out";
  int thread_count = 0;  // 0 = auto; never affects results

  bool operator==(const RunConfig&) const = default;
};

RunConfig run_config_from_json(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

// Range checks; with require_inputs also verifies that every referenced
// input file exists (missing files are config errors with an IoError
// category, exit code 2). Runs before any compute starts.
void validate_run_config(const RunConfig& config, bool require_inputs);

}  // namespace ubf
