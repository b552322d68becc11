#include "ubf/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>

#include "ubf/digest.hpp"
#include "ubf/errors.hpp"
#include "ubf/geometry.hpp"
#include "ubf/parallel.hpp"
#include "ubf/spatial_index.hpp"

namespace ubf {

double clamp_stage1_alpha(double alpha, bool* clamped) {
  const double c = std::clamp(alpha, 0.3, 1.0);
  if (clamped) *clamped = (c != alpha);
  return c;
}

double proximity_score(double distance) { return 1.0 / (1.0 + distance); }

double category_weight(std::int64_t freq, double alpha) {
  return 1.0 / std::pow(static_cast<double>(freq) + 1.0, alpha);
}

namespace {

struct PoiAttachment {
  std::uint32_t building = 0;
  double distance = 0.0;
  bool contained = false;
};

// For each POI: every containing building at d=0, else the single nearest
// building within the assignment radius (ties to the lowest building index,
// i.e. lowest id).
std::vector<std::vector<PoiAttachment>> attach_pois(const Scene& scene,
                                                    const PolygonIndex& index,
                                                    double d_max, int threads) {
  std::vector<std::vector<PoiAttachment>> per_poi(scene.pois.size());
  parallel_for(scene.pois.size(), threads, [&](std::size_t pi) {
    const Point loc = scene.pois[pi].location;
    auto& out = per_poi[pi];
    const auto candidates = index.candidates_near(loc, d_max);
    std::uint32_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    bool have_nearest = false;
    for (const std::uint32_t bi : candidates) {
      const double d = boundary_distance(loc, scene.buildings[bi].polygon);
      if (d == 0.0) {  // inside or on the boundary: maximal proximity
        out.push_back({bi, 0.0, true});
      } else if (d < nearest_d) {
        nearest_d = d;
        nearest = bi;
        have_nearest = true;
      }
      // candidates ascend by index, so the first minimum wins distance ties
    }
    if (out.empty() && have_nearest && nearest_d <= d_max) {
      out.push_back({nearest, nearest_d, false});
    }
  });
  return per_poi;
}

void snapshot_counts(const std::vector<LabelState>& labels,
                     const std::vector<std::vector<std::uint32_t>>& neighbors,
                     std::size_t i, std::array<int, kNumClasses>& counts) {
  counts.fill(0);
  for (const std::uint32_t j : neighbors[i]) {
    if (labels[j].label) counts[class_index(*labels[j].label)]++;
  }
}

}  // namespace

std::vector<LabelState> stage1_candidate_labels(const Scene& scene,
                                                const Stage1Params& params,
                                                int threads) {
  if (!scene.frequencies_computed) {
    raise(ErrorCode::PipelineOrderError,
          "stage 1 requires block frequencies; run compute_block_frequencies first");
  }
  if (!(params.assignment_radius > 0.0) || !std::isfinite(params.assignment_radius)) {
    raise(ErrorCode::InvalidParams, "assignment_radius must be > 0");
  }
  bool clamped = false;
  const double alpha = clamp_stage1_alpha(params.alpha, &clamped);
  if (clamped) {
    std::cerr << "warning: stage1 alpha " << params.alpha
              << " outside [0.3, 1.0], clamped to " << alpha << "\n";
  }

  const PolygonIndex index = PolygonIndex::build(scene.buildings);
  const auto per_poi = attach_pois(scene, index, params.assignment_radius, threads);

  // Category weights per building, from the block holding its centroid.
  std::vector<std::array<double, kNumClasses>> weights(scene.buildings.size());
  parallel_for(scene.buildings.size(), threads, [&](std::size_t bi) {
    const std::uint32_t blk = scene.building_block[bi];
    for (int c = 0; c < kNumClasses; ++c) {
      const std::int64_t freq = (blk == kNoBlock) ? 0 : scene.blocks[blk].poi_counts[c];
      weights[bi][c] = category_weight(freq, alpha);
    }
  });

  std::vector<LabelState> labels(scene.buildings.size());
  for (std::size_t bi = 0; bi < scene.buildings.size(); ++bi) {
    labels[bi].building_id = scene.buildings[bi].id;
    labels[bi].stage = LabelStage::Candidate;
    labels[bi].score_vector = ClassScores{};
  }
  // Accumulate in POI order so the sums are scheduling-independent.
  for (std::size_t pi = 0; pi < per_poi.size(); ++pi) {
    const int c = class_index(scene.pois[pi].function_class);
    for (const PoiAttachment& a : per_poi[pi]) {
      labels[a.building].score_vector->values[c] +=
          weights[a.building][c] * proximity_score(a.distance);
    }
  }
  for (auto& ls : labels) {
    if (!ls.score_vector->all_zero()) {
      ls.label = ls.score_vector->argmax();
    }
  }
  return labels;
}

Stage2Result stage2_refine(const std::vector<LabelState>& labels, const Scene& scene,
                           const Stage2Params& params, int threads) {
  if (labels.size() != scene.buildings.size()) {
    raise(ErrorCode::PipelineOrderError,
          "stage 2 label vector does not match the scene's buildings");
  }
  if (params.k < 1 || params.max_iterations < 1 ||
      params.convergence_epsilon < 0.0 || params.convergence_epsilon >= 1.0) {
    raise(ErrorCode::InvalidParams, "invalid stage 2 parameters");
  }
  const std::size_t n = scene.buildings.size();
  if (static_cast<std::size_t>(params.k) >= n) {
    raise(ErrorCode::KTooLarge,
          "stage 2 k=" + std::to_string(params.k) + " >= building count " + std::to_string(n));
  }

  std::vector<Point> centroids(n);
  for (std::size_t i = 0; i < n; ++i) centroids[i] = scene.buildings[i].centroid;
  const PointIndex index = PointIndex::build(centroids);

  std::vector<std::vector<std::uint32_t>> neighbors(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto found = index.k_nearest_excluding(
        centroids[i], static_cast<std::size_t>(params.k), static_cast<std::uint32_t>(i));
    neighbors[i].reserve(found.size());
    for (const Neighbor& nb : found) neighbors[i].push_back(nb.index);
  });

  Stage2Result result;
  result.labels = labels;
  const double majority = static_cast<double>(params.k) / 2.0;

  std::vector<std::optional<FunctionClass>> next(n);
  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    parallel_for(n, threads, [&](std::size_t i) {
      std::array<int, kNumClasses> counts;
      snapshot_counts(result.labels, neighbors, i, counts);
      int best = 0;
      for (int c = 1; c < kNumClasses; ++c) {
        if (counts[c] > counts[best]) best = c;
      }
      if (static_cast<double>(counts[best]) > majority) {
        next[i] = static_cast<FunctionClass>(best + 1);
      } else {
        next[i] = result.labels[i].label;
      }
    });
    std::int64_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (next[i] != result.labels[i].label) {
        result.labels[i].label = next[i];
        result.labels[i].stage = LabelStage::Refined;
        ++changed;
      }
    }
    result.changes_per_iteration.push_back(changed);
    result.iterations_used = iter;
    const double frac = static_cast<double>(changed) / static_cast<double>(n);
    if (frac <= params.convergence_epsilon) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Stage3Result stage3_correct(const std::vector<LabelState>& labels, const Scene& scene,
                            const CorrectionParams& params, int threads) {
  if (labels.size() != scene.buildings.size()) {
    raise(ErrorCode::PipelineOrderError,
          "stage 3 label vector does not match the scene's buildings");
  }
  struct HighLevel {
    std::uint32_t poi = 0;
    Buffer buffer;
    FunctionClass cls = FunctionClass::Residential;
  };
  std::vector<HighLevel> buffers;
  for (std::uint32_t pi = 0; pi < scene.pois.size(); ++pi) {
    const PoiRecord& p = scene.pois[pi];
    if (!p.is_high_level) continue;
    if (!p.buffer_radius || !(*p.buffer_radius > 0.0) || !std::isfinite(*p.buffer_radius)) {
      raise(ErrorCode::InvalidHighLevelPoi,
            "high-level poi " + p.id + " lacks a positive buffer radius");
    }
    buffers.push_back({pi, Buffer{p.location, *p.buffer_radius, p.id}, p.function_class});
  }

  Stage3Result result;
  result.labels = labels;
  if (buffers.empty()) return result;

  std::vector<std::optional<FunctionClass>> winner(scene.buildings.size());
  parallel_for(scene.buildings.size(), threads, [&](std::size_t bi) {
    const BuildingFootprint& b = scene.buildings[bi];
    // Distance used both for membership (Centroid mode) and conflict rules.
    const auto metric_distance = [&](const HighLevel& hl) {
      if (params.membership_test == MembershipTest::Centroid) {
        return euclidean(b.centroid, hl.buffer.center);
      }
      double best = std::numeric_limits<double>::infinity();
      for (const Point& v : b.polygon.outer.vertices) {
        best = std::min(best, euclidean(v, hl.buffer.center));
      }
      return best;
    };
    const HighLevel* best = nullptr;
    double best_key = std::numeric_limits<double>::infinity();
    for (const HighLevel& hl : buffers) {
      const double d = metric_distance(hl);
      if (d > hl.buffer.radius) continue;  // closed disk membership
      const double key = params.conflict_rule == ConflictRule::NearestPoi
                             ? d
                             : d / hl.buffer.radius;
      // strict `<`: ties stay with the earlier (lowest-id) POI
      if (!best || key < best_key) {
        best = &hl;
        best_key = key;
      }
    }
    if (best) winner[bi] = best->cls;
  });

  for (std::size_t bi = 0; bi < scene.buildings.size(); ++bi) {
    if (!winner[bi]) continue;
    if (result.labels[bi].label != winner[bi]) {
      result.labels[bi].label = winner[bi];
      result.labels[bi].stage = LabelStage::Corrected;
      result.corrections_applied++;
    }
  }
  return result;
}

std::string labeling_digest(const std::vector<LabelState>& labels) {
  std::string text;
  text.reserve(labels.size() * 64);
  char buf[32];
  for (const LabelState& ls : labels) {
    text += ls.building_id;
    text += ',';
    text += ls.label ? std::to_string(class_encoding(*ls.label)) : "0";
    text += ',';
    text += std::to_string(static_cast<int>(ls.stage));
    if (ls.score_vector) {
      for (double v : ls.score_vector->values) {
        std::snprintf(buf, sizeof(buf), ",%.17g", v);
        text += buf;
      }
    }
    text += '\n';
  }
  return fnv1a64_hex(text);
}

PipelineRun run_pipeline(const Scene& scene, const Stage1Params& s1,
                         const Stage2Params& s2, const CorrectionParams& s3,
                         int threads, PipelineSnapshots* snapshots) {
  PipelineRun run;
  run.stage1 = s1;
  run.stage1.alpha = clamp_stage1_alpha(s1.alpha);
  run.stage2 = s2;
  run.stage3 = s3;

  std::vector<LabelState> labels;
  try {
    labels = stage1_candidate_labels(scene, s1, threads);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage1: ") + e.what());
  }
  for (const LabelState& ls : labels) {
    if (ls.label) run.per_stage_change_counts[0]++;
  }
  run.stage1_digest = labeling_digest(labels);

  Stage2Result s2res;
  try {
    s2res = stage2_refine(labels, scene, s2, threads);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage2: ") + e.what());
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (s2res.labels[i].label != labels[i].label) run.per_stage_change_counts[1]++;
  }
  run.iterations_used = s2res.iterations_used;
  run.stage2_changes_per_iteration = std::move(s2res.changes_per_iteration);
  run.stage2_converged = s2res.converged;
  run.stage2_digest = labeling_digest(s2res.labels);

  Stage3Result s3res;
  try {
    s3res = stage3_correct(s2res.labels, scene, s3, threads);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage3: ") + e.what());
  }
  run.per_stage_change_counts[2] = s3res.corrections_applied;
  run.labels = std::move(s3res.labels);
  run.digest = labeling_digest(run.labels);
  if (snapshots) {
    snapshots->stage1 = std::move(labels);
    snapshots->stage2 = std::move(s2res.labels);
  }
  return run;
}

}  // namespace ubf
