#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ubf/model.hpp"
#include "ubf/scene.hpp"

namespace ubf {

struct Stage1Params {
  // Power-decay exponent for the category weight. Values outside [0.3, 1.0]
  // are clamped with a warning.
  double alpha = 0.5;
  // Max distance at which a POI outside every footprint still attaches to
  // its single nearest building.
  double assignment_radius = 50.0;

  bool operator==(const Stage1Params&) const = default;
};

struct Stage2Params {
  int k = 7;
  int max_iterations = 10;
  // Stop when the fraction of labels changed in a sweep is <= this.
  double convergence_epsilon = 0.0;

  bool operator==(const Stage2Params&) const = default;
};

enum class ConflictRule { NearestPoi, SmallestRadiusRatio };
enum class MembershipTest { Centroid, AnyVertex };

struct CorrectionParams {
  ConflictRule conflict_rule = ConflictRule::NearestPoi;
  MembershipTest membership_test = MembershipTest::Centroid;

  bool operator==(const CorrectionParams&) const = default;
};

// Spatial proximity score of a POI at boundary distance d: 1/(1+d).
// Equals 1 exactly at d=0 and strictly decreases with distance.
double proximity_score(double distance);

// Category weight for a class with the given count in the local block:
// 1/(freq+1)^alpha. Equals 1 at freq=0 for every alpha and strictly
// decreases as the class gets more frequent.
double category_weight(std::int64_t freq, double alpha);

// Candidate labels from POI overlay: per-building proximity scores
// alpha = 1/(1+d), block category weights w = 1/(freq+1)^alpha, per-class
// sums, argmax (ties to the lowest class encoding). Buildings with no
// attached POI come back Unlabeled with a zero score vector.
std::vector<LabelState> stage1_candidate_labels(const Scene& scene,
                                                const Stage1Params& params,
                                                int threads = 1);

struct Stage2Result {
  std::vector<LabelState> labels;
  int iterations_used = 0;
  std::vector<std::int64_t> changes_per_iteration;
  bool converged = false;
};

// Synchronous neighborhood-majority refinement over the k nearest building
// centroids (self excluded). A building adopts the majority label only when
// the top count exceeds k/2. Unlabeled buildings can acquire labels but
// never count toward a majority.
Stage2Result stage2_refine(const std::vector<LabelState>& labels, const Scene& scene,
                           const Stage2Params& params, int threads = 1);

struct Stage3Result {
  std::vector<LabelState> labels;
  std::int64_t corrections_applied = 0;
};

// High-level POI buffer correction: a building whose membership point lies
// inside at least one high-level buffer takes the class of the
// conflict-rule-winning POI.
Stage3Result stage3_correct(const std::vector<LabelState>& labels, const Scene& scene,
                            const CorrectionParams& params, int threads = 1);

struct PipelineRun {
  std::vector<LabelState> labels;
  // labels assigned by stage 1; labels changed by stage 2; stage-3 corrections
  std::array<std::int64_t, 3> per_stage_change_counts{};
  std::vector<std::int64_t> stage2_changes_per_iteration;
  int iterations_used = 0;
  bool stage2_converged = false;
  Stage1Params stage1;  // effective (clamped) values
  Stage2Params stage2;
  CorrectionParams stage3;
  std::string stage1_digest;
  std::string stage2_digest;
  std::string digest;  // final labeling
};

// Optional per-stage label snapshots (for --keep-stages exports).
struct PipelineSnapshots {
  std::vector<LabelState> stage1;
  std::vector<LabelState> stage2;
};

PipelineRun run_pipeline(const Scene& scene, const Stage1Params& s1,
                         const Stage2Params& s2, const CorrectionParams& s3,
                         int threads = 1, PipelineSnapshots* snapshots = nullptr);

// Canonical digest of a labeling: FNV-1a 64 over "id,label,stage,s1..s5"
// lines with %.17g score formatting.
std::string labeling_digest(const std::vector<LabelState>& labels);

double clamp_stage1_alpha(double alpha, bool* clamped = nullptr);

}  // namespace ubf
