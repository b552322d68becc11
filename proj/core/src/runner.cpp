#include "ubf/runner.hpp"

#include <filesystem>
#include <sstream>

#include "geojson.hpp"
#include "ubf/digest.hpp"
#include "ubf/errors.hpp"
#include "ubf/parallel.hpp"
#include "ubf/serialize.hpp"

namespace ubf {

namespace {

namespace fs = std::filesystem;
using geojson::ordered_json;

std::string join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    raise(ErrorCode::IoError, "cannot create output directory: " + dir);
  }
}

TaxonomyMap taxonomy_for(const RunConfig& config, std::string* digest_out) {
  if (config.paths.taxonomy.empty()) {
    const TaxonomyMap& map = TaxonomyMap::default_map();
    if (digest_out) *digest_out = fnv1a64_hex(taxonomy_to_tsv(map));
    return map;
  }
  if (digest_out) *digest_out = file_digest_hex(config.paths.taxonomy);
  return TaxonomyMap::load(config.paths.taxonomy);
}

}  // namespace

IngestOutcome run_ingest_command(const RunConfig& config) {
  validate_run_config(config, /*require_inputs=*/true);
  ensure_dir(config.output_dir);

  std::string taxonomy_digest;
  const TaxonomyMap taxonomy = taxonomy_for(config, &taxonomy_digest);

  IngestConfig ingest_cfg = config.ingest;
  ingest_cfg.blocks_path = config.paths.blocks;
  ingest_cfg.high_level_path = config.paths.high_level;

  IngestOutcome outcome;
  outcome.scene = load_scene(config.paths.footprints, config.paths.pois, taxonomy,
                             ingest_cfg, &outcome.report);
  outcome.scene.provenance.taxonomy_digest = taxonomy_digest;
  compute_block_frequencies(outcome.scene);

  save_scene_file(outcome.scene, join(config.output_dir, artifact::kScene));
  write_text_file(join(config.output_dir, artifact::kIngestReport),
                  outcome.report.to_text());
  return outcome;
}

LabelOutcome run_label_command(const RunConfig& config, bool keep_stages) {
  validate_run_config(config, /*require_inputs=*/false);
  const std::string scene_path = join(config.output_dir, artifact::kScene);
  if (!fs::exists(scene_path)) {
    raise(ErrorCode::IoError,
          "no ingested scene at " + scene_path + "; run the ingest command first");
  }
  ensure_dir(config.output_dir);
  const Scene scene = read_scene_file(scene_path);
  const int threads = resolve_threads(config.thread_count);

  PipelineSnapshots snapshots;
  const PipelineRun run = run_pipeline(scene, config.stage1, config.stage2, config.stage3,
                                       threads, keep_stages ? &snapshots : nullptr);

  LabelOutcome outcome;
  outcome.labels_path = join(config.output_dir, artifact::kLabels);
  write_text_file(outcome.labels_path, labels_to_geojson(scene, run.labels));
  if (keep_stages) {
    write_text_file(join(config.output_dir, artifact::kLabelsStage1),
                    labels_to_geojson(scene, snapshots.stage1));
    write_text_file(join(config.output_dir, artifact::kLabelsStage2),
                    labels_to_geojson(scene, snapshots.stage2));
  }

  // The manifest intentionally omits thread_count and any timing: reruns of
  // the same inputs must produce identical bytes regardless of parallelism.
  RunConfig snapshot_cfg = config;
  snapshot_cfg.thread_count = 0;
  ordered_json manifest;
  manifest["format"] = "ubf-manifest-v1";
  manifest["config"] = ordered_json::parse(run_config_to_json(snapshot_cfg));
  manifest["effective_stage1_alpha"] = run.stage1.alpha;
  manifest["scene"] = {{"path", artifact::kScene},
                       {"digest", file_digest_hex(scene_path)},
                       {"buildings", scene.buildings.size()},
                       {"pois", scene.pois.size()},
                       {"blocks", scene.blocks.size()}};
  manifest["pipeline"] = {
      {"per_stage_change_counts", run.per_stage_change_counts},
      {"iterations_used", run.iterations_used},
      {"stage2_changes_per_iteration", run.stage2_changes_per_iteration},
      {"stage2_converged", run.stage2_converged},
  };
  manifest["digests"] = {{"stage1", run.stage1_digest},
                         {"stage2", run.stage2_digest},
                         {"final", run.digest}};
  outcome.manifest_path = join(config.output_dir, artifact::kManifest);
  write_text_file(outcome.manifest_path, manifest.dump(1) + "\n");
  outcome.run = run;
  return outcome;
}

EvalOutcome run_eval_command(const RunConfig& config, std::string labels_path,
                             const std::string& baseline_path, bool per_building,
                             bool export_rasters) {
  validate_run_config(config, /*require_inputs=*/false);
  const std::string scene_path = join(config.output_dir, artifact::kScene);
  if (!fs::exists(scene_path)) {
    raise(ErrorCode::IoError,
          "no ingested scene at " + scene_path + "; run the ingest command first");
  }
  ensure_dir(config.output_dir);
  const Scene scene = read_scene_file(scene_path);
  const int threads = resolve_threads(config.thread_count);
  if (labels_path.empty()) {
    labels_path = join(config.output_dir, artifact::kLabels);
  }

  EvalOutcome outcome;
  const auto labels = read_labels_file(scene, labels_path);
  std::array<ClassRaster, kNumClasses> probability;
  outcome.primary = evaluate_labeling(scene, labels, config.kde, config.w, threads,
                                      export_rasters ? &probability : nullptr);
  outcome.primary.labels_tag = fs::path(labels_path).filename().string();
  write_text_file(join(config.output_dir, artifact::kEvalReport),
                  outcome.primary.to_text());
  if (per_building) {
    write_text_file(join(config.output_dir, artifact::kEvalPerBuilding),
                    outcome.primary.per_building_csv());
  }
  if (export_rasters) {
    for (const ClassRaster& r : probability) {
      const std::string name = "raster_" + std::string(class_name(r.cls)) + ".txt";
      write_text_file(join(config.output_dir, name.c_str()), raster_to_text(r));
    }
  }

  if (!baseline_path.empty()) {
    const auto baseline_labels = read_labels_file(scene, baseline_path);
    EvalReport baseline =
        evaluate_labeling(scene, baseline_labels, config.kde, config.w, threads);
    baseline.labels_tag = fs::path(baseline_path).filename().string();
    write_text_file(join(config.output_dir, artifact::kEvalBaseline), baseline.to_text());
    write_text_file(join(config.output_dir, artifact::kEvalDelta),
                    delta_table(outcome.primary, baseline));
    outcome.baseline = std::move(baseline);
  }
  return outcome;
}

void run_synth_command(const SynthConfig& synth, const std::string& out_dir) {
  ensure_dir(out_dir);
  const auto [scene, truth] = generate_scene(synth);

  std::vector<ordered_json> building_features;
  building_features.reserve(scene.buildings.size());
  for (const auto& b : scene.buildings) {
    ordered_json geometry;
    geometry["type"] = "Polygon";
    geometry["coordinates"] = geojson::polygon_coordinates(b.polygon);
    ordered_json props;
    props["id"] = b.id;
    building_features.push_back(geojson::make_feature(geometry, std::move(props)));
  }
  write_text_file(join(out_dir, artifact::kSynthFootprints),
                  geojson::collection_to_string(building_features));

  std::vector<ordered_json> poi_features;
  poi_features.reserve(scene.pois.size());
  for (const auto& p : scene.pois) {
    ordered_json geometry;
    geometry["type"] = "Point";
    geometry["coordinates"] = geojson::point_coordinates(p.location);
    ordered_json props;
    props["id"] = p.id;
    props["category"] = p.raw_category;
    if (p.is_high_level) {
      props["high_level"] = true;
      props["buffer_radius"] = *p.buffer_radius;
    }
    poi_features.push_back(geojson::make_feature(geometry, std::move(props)));
  }
  write_text_file(join(out_dir, artifact::kSynthPois),
                  geojson::collection_to_string(poi_features));

  write_text_file(join(out_dir, artifact::kSynthTruth), ground_truth_to_csv(truth));

  ordered_json manifest;
  manifest["format"] = "ubf-synth-manifest-v1";
  manifest["config"] = ordered_json::parse(synth_config_to_json(synth));
  manifest["buildings"] = scene.buildings.size();
  manifest["pois"] = scene.pois.size();
  manifest["digests"] = {
      {"footprints", file_digest_hex(join(out_dir, artifact::kSynthFootprints))},
      {"pois", file_digest_hex(join(out_dir, artifact::kSynthPois))},
      {"ground_truth", file_digest_hex(join(out_dir, artifact::kSynthTruth))}};
  write_text_file(join(out_dir, artifact::kSynthManifest), manifest.dump(1) + "\n");
}

std::string run_report_command(const std::string& out_dir) {
  std::ostringstream os;
  os << "run report: " << fs::path(out_dir).filename().string() << "\n";
  const auto append_file = [&](const char* name, const char* title) {
    const std::string path = join(out_dir, name);
    if (!fs::exists(path)) return;
    os << "\n== " << title << " (" << name << ")\n";
    os << read_text_file(path);
  };
  append_file(artifact::kIngestReport, "ingest");
  append_file(artifact::kManifest, "pipeline manifest");
  append_file(artifact::kEvalReport, "evaluation");
  append_file(artifact::kEvalBaseline, "baseline evaluation");
  append_file(artifact::kEvalDelta, "delta");
  const std::string text = os.str();
  ensure_dir(out_dir);
  write_text_file(join(out_dir, artifact::kRunReport), text);
  return text;
}

}  // namespace ubf
