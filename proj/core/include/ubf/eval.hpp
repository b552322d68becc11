#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ubf/model.hpp"
#include "ubf/raster.hpp"
#include "ubf/scene.hpp"

namespace ubf {

struct BuildingEval {
  std::string building_id;
  ClassScores poi_probability;  // zonal mean, sums to 1
  ClassScores label_onehot;
  int top1 = 0;
  double cosine = 0.0;
  double fused = 0.0;  // w*top1 + (1-w)*cosine
};

// Top-1 consistency and cosine similarity of one building against its
// POI-derived probability vector. The label must not be Unlabeled.
BuildingEval score_building(const ClassScores& poi_prob, FunctionClass label, double w);

struct EvalReport {
  std::vector<BuildingEval> per_building;  // scene building order
  double mean_top1 = 0.0;
  double mean_cosine = 0.0;
  double bfmi = 0.0;
  double w = 0.5;
  std::int64_t scored_count = 0;
  std::int64_t excluded_count = 0;  // Unlabeled buildings, skipped and counted
  KdeParams params;
  std::string labels_tag;

  // Stable-order plain text. The per-building table is CSV-ish and optional.
  std::string to_text() const;
  std::string per_building_csv() const;
};

// Full KDE -> normalize -> zonal -> score pipeline over any labeling of the
// scene. labels must parallel scene.buildings. The KDE reference surfaces
// come from the same POI cloud that feeds labeling; the report records that
// circularity.
EvalReport evaluate_labeling(const Scene& scene, const std::vector<LabelState>& labels,
                             const KdeParams& params, double w, int threads = 1,
                             std::array<ClassRaster, kNumClasses>* probability_out = nullptr);

// Side-by-side comparison block for a baseline labeling (same scene).
std::string delta_table(const EvalReport& primary, const EvalReport& baseline);

}  // namespace ubf
