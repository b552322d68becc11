#include "ubf/eval.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ubf/errors.hpp"
#include "ubf/parallel.hpp"

namespace ubf {

BuildingEval score_building(const ClassScores& poi_prob, FunctionClass label, double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    raise(ErrorCode::InvalidParams, "w must lie in [0, 1]");
  }
  BuildingEval ev;
  ev.poi_probability = poi_prob;
  ev.label_onehot = ClassScores{};
  ev.label_onehot[label] = 1.0;
  ev.top1 = poi_prob.argmax() == label ? 1 : 0;
  double norm2 = 0.0;
  for (double v : poi_prob.values) norm2 += v * v;
  ev.cosine = norm2 > 0.0 ? poi_prob[label] / std::sqrt(norm2) : 0.0;
  ev.fused = w * ev.top1 + (1.0 - w) * ev.cosine;
  return ev;
}

EvalReport evaluate_labeling(const Scene& scene, const std::vector<LabelState>& labels,
                             const KdeParams& params, double w, int threads,
                             std::array<ClassRaster, kNumClasses>* probability_out) {
  if (labels.size() != scene.buildings.size()) {
    raise(ErrorCode::InvalidParams, "labels do not parallel the scene's buildings");
  }
  if (!(w >= 0.0 && w <= 1.0)) {
    raise(ErrorCode::InvalidParams, "w must lie in [0, 1]");
  }

  EvalReport report;
  report.w = w;
  report.params = params;

  // Reference surfaces: per-class KDE over the padded scene extent.
  const BoundingBox extent = scene.extent.padded(params.pad_sigmas * params.bandwidth);
  std::array<std::vector<Point>, kNumClasses> class_points;
  for (const PoiRecord& p : scene.pois) {
    class_points[class_index(p.function_class)].push_back(p.location);
  }
  std::array<ClassRaster, kNumClasses> densities;
  for (int c = 0; c < kNumClasses; ++c) {
    densities[c] = kde_density(class_points[c], params, extent,
                               static_cast<FunctionClass>(c + 1), threads);
  }
  const auto probability = normalize_probability(densities, params.epsilon);

  struct Slot {
    bool scored = false;
    BuildingEval ev;
  };
  std::vector<Slot> slots(scene.buildings.size());
  parallel_for(scene.buildings.size(), threads, [&](std::size_t i) {
    if (!labels[i].label) return;  // Unlabeled: skipped, counted below
    const ClassScores zonal = zonal_mean(probability, scene.buildings[i]);
    slots[i].ev = score_building(zonal, *labels[i].label, w);
    slots[i].ev.building_id = scene.buildings[i].id;
    slots[i].scored = true;
  });

  double sum_top1 = 0.0, sum_cos = 0.0, sum_fused = 0.0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].scored) {
      report.excluded_count++;
      continue;
    }
    report.per_building.push_back(slots[i].ev);
    sum_top1 += slots[i].ev.top1;
    sum_cos += slots[i].ev.cosine;
    sum_fused += slots[i].ev.fused;
    report.scored_count++;
  }
  if (report.scored_count > 0) {
    const double n = static_cast<double>(report.scored_count);
    report.mean_top1 = sum_top1 / n;
    report.mean_cosine = sum_cos / n;
    report.bfmi = sum_fused / n;
  }
  if (probability_out) *probability_out = probability;
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

}  // namespace

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os << "eval report\n";
  os << "labels: " << labels_tag << "\n";
  os << "scored_buildings: " << scored_count << "\n";
  os << "excluded_unlabeled: " << excluded_count << "\n";
  os << "mean_top1: " << fmt(mean_top1) << "\n";
  os << "mean_cosine: " << fmt(mean_cosine) << "\n";
  os << "bfmi: " << fmt(bfmi) << "\n";
  os << "w: " << fmt(w) << "\n";
  os << "kde_bandwidth: " << fmt(params.bandwidth) << "\n";
  os << "kde_cell_size: " << fmt(params.cell_size) << "\n";
  os << "kde_epsilon: " << params.epsilon << "\n";
  os << "note: reference surfaces derive from the same POI set used for labeling;"
        " the score measures agreement with POI evidence, not independent ground truth\n";
  return os.str();
}

std::string EvalReport::per_building_csv() const {
  std::ostringstream os;
  os << "building_id,label_top1,cosine,fused,p1,p2,p3,p4,p5\n";
  for (const BuildingEval& ev : per_building) {
    os << ev.building_id << "," << ev.top1 << "," << fmt(ev.cosine) << "," << fmt(ev.fused);
    for (double v : ev.poi_probability.values) os << "," << fmt(v);
    os << "\n";
  }
  return os.str();
}

std::string delta_table(const EvalReport& primary, const EvalReport& baseline) {
  std::ostringstream os;
  os << "metric        labels        baseline      delta\n";
  const auto row = [&os](const char* name, double a, double b) {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%-12s  %12.9f  %12.9f  %+12.9f\n", name, a, b, a - b);
    os << buf;
  };
  row("mean_top1", primary.mean_top1, baseline.mean_top1);
  row("mean_cosine", primary.mean_cosine, baseline.mean_cosine);
  row("bfmi", primary.bfmi, baseline.bfmi);
  return os.str();
}

}  // namespace ubf
