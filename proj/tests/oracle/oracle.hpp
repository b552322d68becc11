#pragma once

// Naive exhaustive re-implementations used as test oracles. These share
// only the core model types with the library: geometry predicates, indexes,
// and pipeline internals are all re-derived here from the definitions, with
// no spatial index and no incremental state.

#include <cstdint>
#include <vector>

#include "ubf/labeling.hpp"
#include "ubf/model.hpp"
#include "ubf/raster.hpp"
#include "ubf/scene.hpp"

namespace oracle {

double point_distance(ubf::Point a, ubf::Point b);
double segment_distance(ubf::Point p, ubf::Point a, ubf::Point b);
bool polygon_contains(const ubf::Polygon& poly, ubf::Point p);
double polygon_boundary_distance(ubf::Point p, const ubf::Polygon& poly);

struct RankedNeighbor {
  std::uint32_t index;
  double distance;
};

// Full-scan kNN sorted by (distance, index); exclude < 0 disables skipping.
std::vector<RankedNeighbor> knn(const std::vector<ubf::Point>& points, ubf::Point q,
                                std::size_t k, std::int64_t exclude = -1);
std::vector<std::uint32_t> range_query(const std::vector<ubf::Point>& points,
                                       const ubf::BoundingBox& rect);
std::vector<std::uint32_t> radius_query(const std::vector<ubf::Point>& points,
                                        ubf::Point q, double radius);

// Candidate labels per the overlay definition, everything brute force:
// block frequencies re-tallied from the grid, containers and nearest
// buildings found by scanning every footprint.
std::vector<ubf::LabelState> stage1(const ubf::Scene& scene,
                                    const ubf::Stage1Params& params);

// Synchronous majority refinement; returns the label history, one snapshot
// per sweep (index 0 = input).
std::vector<std::vector<ubf::LabelState>> stage2_history(
    const std::vector<ubf::LabelState>& labels, const ubf::Scene& scene,
    const ubf::Stage2Params& params);
ubf::Stage2Result stage2(const std::vector<ubf::LabelState>& labels,
                         const ubf::Scene& scene, const ubf::Stage2Params& params);

// Zonal mean by scanning every raster cell with an independent
// point-in-polygon test.
ubf::ClassScores zonal(const std::array<ubf::ClassRaster, ubf::kNumClasses>& probability,
                       const ubf::BuildingFootprint& building);

// Direct double-loop KDE, no cutoff, no index.
ubf::ClassRaster kde(const std::vector<ubf::Point>& pois, const ubf::KdeParams& params,
                     const ubf::BoundingBox& extent, ubf::FunctionClass cls);

}  // namespace oracle
