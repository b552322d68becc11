#include "oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace oracle {

double point_distance(ubf::Point a, ubf::Point b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double segment_distance(ubf::Point p, ubf::Point a, ubf::Point b) {
  const double abx = b.x - a.x, aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  if (len2 == 0.0) return point_distance(p, a);
  const double t = std::clamp(((p.x - a.x) * abx + (p.y - a.y) * aby) / len2, 0.0, 1.0);
  return point_distance(p, {a.x + t * abx, a.y + t * aby});
}

namespace {

bool on_any_segment(ubf::Point p, const ubf::Ring& ring) {
  const auto& v = ring.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if (segment_distance(p, v[j], v[i]) == 0.0) return true;
  }
  return false;
}

bool crossing_inside(ubf::Point p, const ubf::Ring& ring) {
  const auto& v = ring.vertices;
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double xc = (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x;
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

bool polygon_contains(const ubf::Polygon& poly, ubf::Point p) {
  if (on_any_segment(p, poly.outer)) return true;
  for (const auto& h : poly.holes) {
    if (on_any_segment(p, h)) return true;
  }
  bool inside = crossing_inside(p, poly.outer);
  for (const auto& h : poly.holes) {
    if (crossing_inside(p, h)) inside = !inside;
  }
  return inside;
}

double polygon_boundary_distance(ubf::Point p, const ubf::Polygon& poly) {
  if (polygon_contains(poly, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const auto scan = [&](const ubf::Ring& r) {
    const auto& v = r.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
      best = std::min(best, segment_distance(p, v[j], v[i]));
    }
  };
  scan(poly.outer);
  for (const auto& h : poly.holes) scan(h);
  return best;
}

std::vector<RankedNeighbor> knn(const std::vector<ubf::Point>& points, ubf::Point q,
                                std::size_t k, std::int64_t exclude) {
  std::vector<RankedNeighbor> all;
  all.reserve(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    if (exclude >= 0 && i == static_cast<std::uint32_t>(exclude)) continue;
    all.push_back({i, point_distance(q, points[i])});
  }
  std::sort(all.begin(), all.end(), [](const RankedNeighbor& a, const RankedNeighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<std::uint32_t> range_query(const std::vector<ubf::Point>& points,
                                       const ubf::BoundingBox& rect) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    if (rect.contains(points[i])) out.push_back(i);
  }
  return out;
}

std::vector<std::uint32_t> radius_query(const std::vector<ubf::Point>& points,
                                        ubf::Point q, double radius) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    if (point_distance(q, points[i]) <= radius) out.push_back(i);
  }
  return out;
}

std::vector<ubf::LabelState> stage1(const ubf::Scene& scene,
                                    const ubf::Stage1Params& params) {
  const double alpha = std::clamp(params.alpha, 0.3, 1.0);
  const double d_max = params.assignment_radius;
  const std::size_t nb = scene.buildings.size();

  // Independent per-grid-cell frequency tally (grid block mode).
  const double g = scene.block_mode.grid_size;
  const auto cell_of = [&](ubf::Point p) {
    const double w = std::max(scene.extent.width(), 0.0);
    const double h = std::max(scene.extent.height(), 0.0);
    const int cols = std::max(1, static_cast<int>(std::ceil(w / g)));
    const int rows = std::max(1, static_cast<int>(std::ceil(h / g)));
    int c = static_cast<int>(std::floor((p.x - scene.extent.min_x) / g));
    int r = static_cast<int>(std::floor((p.y - scene.extent.min_y) / g));
    c = std::clamp(c, 0, cols - 1);
    r = std::clamp(r, 0, rows - 1);
    return std::pair<int, int>(r, c);
  };
  std::map<std::pair<int, int>, std::array<std::int64_t, ubf::kNumClasses>> freq;
  for (const auto& poi : scene.pois) {
    freq[cell_of(poi.location)][ubf::class_index(poi.function_class)]++;
  }

  std::vector<ubf::LabelState> labels(nb);
  for (std::size_t bi = 0; bi < nb; ++bi) {
    labels[bi].building_id = scene.buildings[bi].id;
    labels[bi].stage = ubf::LabelStage::Candidate;
    labels[bi].score_vector = ubf::ClassScores{};
  }

  // Per POI, in POI order: every containing building at d=0, else the single
  // nearest within d_max (lowest index on ties).
  for (const auto& poi : scene.pois) {
    std::vector<std::pair<std::size_t, double>> attached;
    std::size_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const double d = polygon_boundary_distance(poi.location, scene.buildings[bi].polygon);
      if (d == 0.0) {
        attached.emplace_back(bi, 0.0);
      } else if (d < nearest_d) {
        nearest_d = d;
        nearest = bi;
      }
    }
    if (attached.empty() && nearest_d <= d_max) {
      attached.emplace_back(nearest, nearest_d);
    }
    const int ci = ubf::class_index(poi.function_class);
    for (const auto& [bi, d] : attached) {
      const auto it = freq.find(cell_of(scene.buildings[bi].centroid));
      const std::int64_t f = it == freq.end() ? 0 : it->second[ci];
      const double w = 1.0 / std::pow(static_cast<double>(f) + 1.0, alpha);
      labels[bi].score_vector->values[ci] += w * (1.0 / (1.0 + d));
    }
  }

  for (auto& ls : labels) {
    if (!ls.score_vector->all_zero()) {
      int best = 0;
      for (int c = 1; c < ubf::kNumClasses; ++c) {
        if (ls.score_vector->values[c] > ls.score_vector->values[best]) best = c;
      }
      ls.label = static_cast<ubf::FunctionClass>(best + 1);
    }
  }
  return labels;
}

std::vector<std::vector<ubf::LabelState>> stage2_history(
    const std::vector<ubf::LabelState>& labels, const ubf::Scene& scene,
    const ubf::Stage2Params& params) {
  std::vector<ubf::Point> centroids;
  centroids.reserve(scene.buildings.size());
  for (const auto& b : scene.buildings) centroids.push_back(b.centroid);

  std::vector<std::vector<ubf::LabelState>> history;
  history.push_back(labels);
  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    const auto& prev = history.back();
    auto next = prev;
    std::int64_t changed = 0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      const auto neighbors =
          knn(centroids, centroids[i], static_cast<std::size_t>(params.k),
              static_cast<std::int64_t>(i));
      std::array<int, ubf::kNumClasses> counts{};
      for (const auto& nb : neighbors) {
        if (prev[nb.index].label) counts[ubf::class_index(*prev[nb.index].label)]++;
      }
      int best = 0;
      for (int c = 1; c < ubf::kNumClasses; ++c) {
        if (counts[c] > counts[best]) best = c;
      }
      if (static_cast<double>(counts[best]) > static_cast<double>(params.k) / 2.0) {
        const auto cls = static_cast<ubf::FunctionClass>(best + 1);
        if (next[i].label != cls) {
          next[i].label = cls;
          next[i].stage = ubf::LabelStage::Refined;
          ++changed;
        }
      }
    }
    history.push_back(std::move(next));
    if (static_cast<double>(changed) / static_cast<double>(prev.size()) <=
        params.convergence_epsilon) {
      break;
    }
  }
  return history;
}

ubf::Stage2Result stage2(const std::vector<ubf::LabelState>& labels,
                         const ubf::Scene& scene, const ubf::Stage2Params& params) {
  auto history = stage2_history(labels, scene, params);
  ubf::Stage2Result result;
  result.labels = history.back();
  result.iterations_used = static_cast<int>(history.size()) - 1;
  for (std::size_t h = 1; h < history.size(); ++h) {
    std::int64_t changed = 0;
    for (std::size_t i = 0; i < history[h].size(); ++i) {
      if (history[h][i].label != history[h - 1][i].label) ++changed;
    }
    result.changes_per_iteration.push_back(changed);
  }
  result.converged = !result.changes_per_iteration.empty() &&
                     static_cast<double>(result.changes_per_iteration.back()) /
                             static_cast<double>(labels.size()) <=
                         params.convergence_epsilon;
  return result;
}

ubf::ClassScores zonal(const std::array<ubf::ClassRaster, ubf::kNumClasses>& probability,
                       const ubf::BuildingFootprint& building) {
  const ubf::GridGeometry& grid = probability[0].grid;
  ubf::ClassScores sums{};
  std::int64_t covered = 0;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (!polygon_contains(building.polygon, grid.cell_center(r, c))) continue;
      for (int k = 0; k < ubf::kNumClasses; ++k) sums.values[k] += probability[k].at(r, c);
      ++covered;
    }
  }
  if (covered == 0) {
    const int r = std::clamp(
        static_cast<int>(std::floor((building.centroid.y - grid.origin.y) / grid.cell_size)),
        0, grid.rows - 1);
    const int c = std::clamp(
        static_cast<int>(std::floor((building.centroid.x - grid.origin.x) / grid.cell_size)),
        0, grid.cols - 1);
    for (int k = 0; k < ubf::kNumClasses; ++k) sums.values[k] = probability[k].at(r, c);
    covered = 1;
  }
  ubf::ClassScores mean{};
  for (int k = 0; k < ubf::kNumClasses; ++k) {
    mean.values[k] = sums.values[k] / static_cast<double>(covered);
  }
  const double total = mean.sum();
  if (total > 0.0) {
    for (int k = 0; k < ubf::kNumClasses; ++k) mean.values[k] /= total;
  }
  return mean;
}

ubf::ClassRaster kde(const std::vector<ubf::Point>& pois, const ubf::KdeParams& params,
                     const ubf::BoundingBox& extent, ubf::FunctionClass cls) {
  ubf::ClassRaster raster;
  raster.grid.origin = {extent.min_x, extent.min_y};
  raster.grid.cell_size = params.cell_size;
  raster.grid.cols = std::max(1, static_cast<int>(std::ceil(extent.width() / params.cell_size)));
  raster.grid.rows = std::max(1, static_cast<int>(std::ceil(extent.height() / params.cell_size)));
  raster.cls = cls;
  raster.kind = ubf::RasterKind::Density;
  raster.cells.assign(static_cast<std::size_t>(raster.grid.rows) * raster.grid.cols, 0.0);
  const double h = params.bandwidth;
  const double norm = 1.0 / (2.0 * std::numbers::pi * h * h);
  for (int r = 0; r < raster.grid.rows; ++r) {
    for (int c = 0; c < raster.grid.cols; ++c) {
      const ubf::Point center = raster.grid.cell_center(r, c);
      double acc = 0.0;
      for (const ubf::Point& p : pois) {
        const double dx = center.x - p.x;
        const double dy = center.y - p.y;
        acc += std::exp(-(dx * dx + dy * dy) / (2.0 * h * h));
      }
      raster.at(r, c) = acc * norm;
    }
  }
  return raster;
}

}  // namespace oracle
