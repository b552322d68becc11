// Batch frontend: ingest -> label -> eval over a single config file, plus
// the synthetic-scene generator and a run-directory report.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 pipeline error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ubf/config.hpp"
#include "ubf/errors.hpp"
#include "ubf/runner.hpp"
#include "ubf/serialize.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_override;
  int threads = -1;  // -1: keep config value
};

ubf::RunConfig load_config(const CommonFlags& flags) {
  if (flags.config_path.empty()) {
    throw ubf::Error(ubf::ErrorCode::ConfigError, "--config is required");
  }
  ubf::RunConfig config = ubf::load_run_config(flags.config_path);
  if (!flags.out_override.empty()) config.output_dir = flags.out_override;
  if (flags.threads >= 0) config.thread_count = flags.threads;
  return config;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
  auto* opt = cmd->add_option("--config", flags.config_path, "Run config file (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--out", flags.out_override, "Output directory (overrides config)");
  cmd->add_option("--threads", flags.threads, "Worker threads (0 = auto; overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"building-function labeling pipeline and BFMI evaluation"};
  app.require_subcommand(1);

  CommonFlags ingest_flags, label_flags, eval_flags;
  bool keep_stages = false;
  std::string eval_labels, eval_baseline;
  bool eval_per_building = false, eval_export_rasters = false;
  std::string synth_config_path, synth_out = "out";
  std::optional<std::uint64_t> synth_seed;
  std::string report_dir;

  auto* ingest = app.add_subcommand("ingest", "Load, validate, and assemble the scene");
  add_common(ingest, ingest_flags);

  auto* label = app.add_subcommand("label", "Run the 3-stage labeling pipeline");
  add_common(label, label_flags);
  label->add_flag("--keep-stages", keep_stages, "Also export stage-1/stage-2 snapshots");

  auto* eval = app.add_subcommand("eval", "Score a labeling against POI-derived surfaces");
  add_common(eval, eval_flags);
  eval->add_option("--labels", eval_labels, "Labeling to score (default <out>/labels.geojson)");
  eval->add_option("--baseline", eval_baseline, "Second labeling for a side-by-side delta");
  eval->add_flag("--per-building", eval_per_building, "Also write the per-building table");
  eval->add_flag("--export-rasters", eval_export_rasters, "Also write probability rasters");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene with ground truth");
  synth->add_option("--config", synth_config_path, "Synth config file (JSON)")->required();
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--seed", synth_seed, "Seed override");

  auto* report = app.add_subcommand("report", "Print a consolidated run summary");
  report->add_option("--out", report_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems are config errors
  }

  try {
    if (ingest->parsed()) {
      const auto outcome = ubf::run_ingest_command(load_config(ingest_flags));
      std::cout << outcome.report.to_text();
    } else if (label->parsed()) {
      const auto outcome = ubf::run_label_command(load_config(label_flags), keep_stages);
      std::cout << "labels: " << outcome.labels_path << "\n"
                << "manifest: " << outcome.manifest_path << "\n"
                << "digest: " << outcome.run.digest << "\n"
                << "iterations_used: " << outcome.run.iterations_used << "\n";
    } else if (eval->parsed()) {
      const auto outcome = ubf::run_eval_command(load_config(eval_flags), eval_labels,
                                                 eval_baseline, eval_per_building,
                                                 eval_export_rasters);
      std::cout << outcome.primary.to_text();
      if (outcome.baseline) {
        std::cout << "\n" << ubf::delta_table(outcome.primary, *outcome.baseline);
      }
    } else if (synth->parsed()) {
      ubf::SynthConfig config =
          ubf::synth_config_from_json(ubf::read_text_file(synth_config_path));
      if (synth_seed) config.seed = *synth_seed;
      ubf::run_synth_command(config, synth_out);
      std::cout << "synthetic scene written to " << synth_out << "\n";
    } else if (report->parsed()) {
      std::cout << ubf::run_report_command(report_dir);
    }
  } catch (const ubf::Error& e) {
    std::cerr << "error[" << ubf::error_code_name(e.code()) << "]: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error[Internal]: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
