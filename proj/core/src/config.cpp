#include "ubf/config.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include "geojson.hpp"
#include "ubf/errors.hpp"

namespace ubf {

namespace {

using geojson::ordered_json;

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (known.count(key) == 0) {
      raise(ErrorCode::ConfigError, where + ": unknown key '" + key + "'");
    }
  }
}

ConflictRule conflict_rule_from(const std::string& s, const std::string& where) {
  if (s == "nearest_poi") return ConflictRule::NearestPoi;
  if (s == "smallest_radius_ratio") return ConflictRule::SmallestRadiusRatio;
  raise(ErrorCode::ConfigError, where + ": unknown conflict_rule '" + s + "'");
}

MembershipTest membership_test_from(const std::string& s, const std::string& where) {
  if (s == "centroid") return MembershipTest::Centroid;
  if (s == "any_vertex") return MembershipTest::AnyVertex;
  raise(ErrorCode::ConfigError, where + ": unknown membership_test '" + s + "'");
}

const char* conflict_rule_name(ConflictRule r) {
  return r == ConflictRule::NearestPoi ? "nearest_poi" : "smallest_radius_ratio";
}

const char* membership_test_name(MembershipTest m) {
  return m == MembershipTest::Centroid ? "centroid" : "any_vertex";
}

}  // namespace

RunConfig run_config_from_json(const std::string& text, const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    raise(ErrorCode::ConfigError, origin + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) {
    raise(ErrorCode::ConfigError, origin + ": config must be a JSON object");
  }
  reject_unknown_keys(doc,
                      {"paths", "ingest", "stage1", "stage2", "stage3", "kde", "w",
                       "output_dir", "thread_count"},
                      origin);
  RunConfig c;
  if (doc.contains("paths")) {
    const auto& p = doc["paths"];
    reject_unknown_keys(p, {"footprints", "pois", "taxonomy", "blocks", "high_level"},
                        origin + ".paths");
    c.paths.footprints = p.value("footprints", "");
    c.paths.pois = p.value("pois", "");
    c.paths.taxonomy = p.value("taxonomy", "");
    c.paths.blocks = p.value("blocks", "");
    c.paths.high_level = p.value("high_level", "");
  }
  if (doc.contains("ingest")) {
    const auto& g = doc["ingest"];
    reject_unknown_keys(g, {"block_grid_size", "fields"}, origin + ".ingest");
    c.ingest.block_grid_size = g.value("block_grid_size", 500.0);
    if (g.contains("fields")) {
      const auto& f = g["fields"];
      reject_unknown_keys(f, {"id", "category", "high_level", "buffer_radius", "block_id"},
                          origin + ".ingest.fields");
      c.ingest.fields.id = f.value("id", "id");
      c.ingest.fields.category = f.value("category", "category");
      c.ingest.fields.high_level = f.value("high_level", "high_level");
      c.ingest.fields.buffer_radius = f.value("buffer_radius", "buffer_radius");
      c.ingest.fields.block_id = f.value("block_id", "block_id");
    }
  }
  if (doc.contains("stage1")) {
    const auto& s = doc["stage1"];
    reject_unknown_keys(s, {"alpha", "assignment_radius"}, origin + ".stage1");
    c.stage1.alpha = s.value("alpha", 0.5);
    c.stage1.assignment_radius = s.value("assignment_radius", 50.0);
  }
  if (doc.contains("stage2")) {
    const auto& s = doc["stage2"];
    reject_unknown_keys(s, {"k", "max_iterations", "convergence_epsilon"}, origin + ".stage2");
    c.stage2.k = s.value("k", 7);
    c.stage2.max_iterations = s.value("max_iterations", 10);
    c.stage2.convergence_epsilon = s.value("convergence_epsilon", 0.0);
  }
  if (doc.contains("stage3")) {
    const auto& s = doc["stage3"];
    reject_unknown_keys(s, {"conflict_rule", "membership_test"}, origin + ".stage3");
    c.stage3.conflict_rule =
        conflict_rule_from(s.value("conflict_rule", "nearest_poi"), origin + ".stage3");
    c.stage3.membership_test =
        membership_test_from(s.value("membership_test", "centroid"), origin + ".stage3");
  }
  if (doc.contains("kde")) {
    const auto& k = doc["kde"];
    reject_unknown_keys(k, {"bandwidth", "cell_size", "epsilon", "cutoff_sigmas", "pad_sigmas"},
                        origin + ".kde");
    c.kde.bandwidth = k.value("bandwidth", 200.0);
    c.kde.cell_size = k.value("cell_size", 20.0);
    c.kde.epsilon = k.value("epsilon", 1e-9);
    c.kde.cutoff_sigmas = k.value("cutoff_sigmas", 8.0);
    c.kde.pad_sigmas = k.value("pad_sigmas", 4.0);
  }
  c.w = doc.value("w", 0.5);
  c.output_dir = doc.value("output_dir", "out");
  c.thread_count = doc.value("thread_count", 0);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::string text;
  try {
    text = geojson::read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::IoError, "cannot open config file: " + path, 2);
  }
  return run_config_from_json(text, path);
}

std::string run_config_to_json(const RunConfig& c) {
  ordered_json doc;
  doc["paths"] = {{"footprints", c.paths.footprints},
                  {"pois", c.paths.pois},
                  {"taxonomy", c.paths.taxonomy},
                  {"blocks", c.paths.blocks},
                  {"high_level", c.paths.high_level}};
  doc["ingest"] = {{"block_grid_size", c.ingest.block_grid_size},
                   {"fields",
                    {{"id", c.ingest.fields.id},
                     {"category", c.ingest.fields.category},
                     {"high_level", c.ingest.fields.high_level},
                     {"buffer_radius", c.ingest.fields.buffer_radius},
                     {"block_id", c.ingest.fields.block_id}}}};
  doc["stage1"] = {{"alpha", c.stage1.alpha},
                   {"assignment_radius", c.stage1.assignment_radius}};
  doc["stage2"] = {{"k", c.stage2.k},
                   {"max_iterations", c.stage2.max_iterations},
                   {"convergence_epsilon", c.stage2.convergence_epsilon}};
  doc["stage3"] = {{"conflict_rule", conflict_rule_name(c.stage3.conflict_rule)},
                   {"membership_test", membership_test_name(c.stage3.membership_test)}};
  doc["kde"] = {{"bandwidth", c.kde.bandwidth},
                {"cell_size", c.kde.cell_size},
                {"epsilon", c.kde.epsilon},
                {"cutoff_sigmas", c.kde.cutoff_sigmas},
                {"pad_sigmas", c.kde.pad_sigmas}};
  doc["w"] = c.w;
  doc["output_dir"] = c.output_dir;
  doc["thread_count"] = c.thread_count;
  return doc.dump(1) + "\n";
}

void validate_run_config(const RunConfig& c, bool require_inputs) {
  const auto check = [](bool ok, const std::string& msg) {
    if (!ok) raise(ErrorCode::ConfigError, msg);
  };
  check(std::isfinite(c.stage1.alpha), "stage1.alpha must be finite");
  check(c.stage1.assignment_radius > 0.0 && std::isfinite(c.stage1.assignment_radius),
        "stage1.assignment_radius must be > 0");
  check(c.stage2.k >= 1, "stage2.k must be >= 1");
  check(c.stage2.max_iterations >= 1, "stage2.max_iterations must be >= 1");
  check(c.stage2.convergence_epsilon >= 0.0 && c.stage2.convergence_epsilon < 1.0,
        "stage2.convergence_epsilon must lie in [0, 1)");
  check(c.kde.bandwidth > 0.0 && std::isfinite(c.kde.bandwidth),
        "kde.bandwidth must be > 0");
  check(c.kde.cell_size > 0.0 && std::isfinite(c.kde.cell_size),
        "kde.cell_size must be > 0");
  check(c.kde.epsilon > 0.0 && std::isfinite(c.kde.epsilon), "kde.epsilon must be > 0");
  check(c.kde.cutoff_sigmas >= 0.0, "kde.cutoff_sigmas must be >= 0");
  check(c.kde.pad_sigmas >= 0.0, "kde.pad_sigmas must be >= 0");
  check(c.w >= 0.0 && c.w <= 1.0, "w must lie in [0, 1]");
  check(c.ingest.block_grid_size > 0.0 && std::isfinite(c.ingest.block_grid_size),
        "ingest.block_grid_size must be > 0");
  check(c.thread_count >= 0, "thread_count must be >= 0");
  check(!c.output_dir.empty(), "output_dir must not be empty");

  if (require_inputs) {
    const auto must_exist = [](const std::string& path, const char* what) {
      if (path.empty()) {
        throw Error(ErrorCode::ConfigError,
                    std::string("config does not name a ") + what + " file");
      }
      if (!std::filesystem::exists(path)) {
        // Missing referenced files are caught at validation time: config
        // error exit, IoError category.
        throw Error(ErrorCode::IoError, std::string(what) + " file not found: " + path, 2);
      }
    };
    must_exist(c.paths.footprints, "footprints");
    must_exist(c.paths.pois, "pois");
    const auto optional_exists = [](const std::string& path, const char* what) {
      if (!path.empty() && !std::filesystem::exists(path)) {
        throw Error(ErrorCode::IoError, std::string(what) + " file not found: " + path, 2);
      }
    };
    optional_exists(c.paths.taxonomy, "taxonomy");
    optional_exists(c.paths.blocks, "blocks");
    optional_exists(c.paths.high_level, "high_level");
  }
}

}  // namespace ubf
