#pragma once

#include <optional>
#include <string>

#include "ubf/config.hpp"
#include "ubf/eval.hpp"
#include "ubf/synth.hpp"

namespace ubf {

// Fixed artifact names inside an output directory.
namespace artifact {
inline constexpr const char* kScene = "scene.json";
inline constexpr const char* kIngestReport = "ingest_report.txt";
inline constexpr const char* kLabels = "labels.geojson";
inline constexpr const char* kLabelsStage1 = "labels_stage1.geojson";
inline constexpr const char* kLabelsStage2 = "labels_stage2.geojson";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kEvalReport = "eval_report.txt";
inline constexpr const char* kEvalBaseline = "eval_baseline_report.txt";
inline constexpr const char* kEvalDelta = "eval_delta.txt";
inline constexpr const char* kEvalPerBuilding = "eval_per_building.csv";
inline constexpr const char* kRunReport = "report.txt";
inline constexpr const char* kSynthFootprints = "footprints.geojson";
inline constexpr const char* kSynthPois = "pois.geojson";
inline constexpr const char* kSynthTruth = "ground_truth.csv";
inline constexpr const char* kSynthManifest = "synth_manifest.json";
}  // namespace artifact

// Command bodies shared by the CLI and the test suites. Each writes its
// artifacts under config.output_dir and throws ubf::Error on failure.

struct IngestOutcome {
  Scene scene;
  IngestReport report;
};
IngestOutcome run_ingest_command(const RunConfig& config);

struct LabelOutcome {
  PipelineRun run;
  std::string labels_path;
  std::string manifest_path;
};
// Requires the scene file produced by `ingest` under config.output_dir.
LabelOutcome run_label_command(const RunConfig& config, bool keep_stages);

struct EvalOutcome {
  EvalReport primary;
  std::optional<EvalReport> baseline;
};
// labels_path empty: evaluates <output_dir>/labels.geojson.
EvalOutcome run_eval_command(const RunConfig& config, std::string labels_path,
                             const std::string& baseline_path, bool per_building,
                             bool export_rasters);

void run_synth_command(const SynthConfig& synth, const std::string& out_dir);

// Consolidated summary of whatever artifacts exist in out_dir; also written
// to report.txt there.
std::string run_report_command(const std::string& out_dir);

}  // namespace ubf
