#include "ubf/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ubf/errors.hpp"
#include "ubf/geometry.hpp"
#include "ubf/parallel.hpp"
#include "ubf/spatial_index.hpp"

namespace ubf {

GridGeometry grid_for_extent(const BoundingBox& extent, double cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    raise(ErrorCode::InvalidParams, "cell_size must be > 0");
  }
  if (!(extent.width() >= 0.0) || !(extent.height() >= 0.0)) {
    raise(ErrorCode::InvalidParams, "degenerate raster extent");
  }
  GridGeometry g;
  g.origin = {extent.min_x, extent.min_y};
  g.cell_size = cell_size;
  g.cols = std::max(1, static_cast<int>(std::ceil(extent.width() / cell_size)));
  g.rows = std::max(1, static_cast<int>(std::ceil(extent.height() / cell_size)));
  return g;
}

ClassRaster kde_density(std::span<const Point> pois, const KdeParams& params,
                        const BoundingBox& extent, FunctionClass cls, int threads) {
  const double h = params.bandwidth;
  if (!(h > 0.0) || !std::isfinite(h)) {
    raise(ErrorCode::InvalidParams, "kde bandwidth must be > 0");
  }
  ClassRaster raster;
  raster.grid = grid_for_extent(extent, params.cell_size);
  raster.cls = cls;
  raster.kind = RasterKind::Density;
  raster.cells.assign(static_cast<std::size_t>(raster.grid.rows) * raster.grid.cols, 0.0);
  if (pois.empty()) return raster;

  const double inv_two_h2 = 1.0 / (2.0 * h * h);
  const double norm = 1.0 / (2.0 * std::numbers::pi * h * h);
  const double cutoff =
      params.cutoff_sigmas > 0.0 ? params.cutoff_sigmas * h : std::numeric_limits<double>::infinity();
  const double cutoff2 = cutoff * cutoff;

  // Cell-parallel with a fixed per-cell candidate order keeps the sums
  // independent of the thread count.
  const PointIndex index = PointIndex::build(pois);
  const bool use_index = std::isfinite(cutoff);
  const int cols = raster.grid.cols;
  parallel_for(static_cast<std::size_t>(raster.grid.rows), threads, [&](std::size_t r) {
    for (int c = 0; c < cols; ++c) {
      const Point center = raster.grid.cell_center(static_cast<int>(r), c);
      double acc = 0.0;
      if (use_index) {
        for (const std::uint32_t i : index.within_radius(center, cutoff)) {
          const double dx = center.x - pois[i].x;
          const double dy = center.y - pois[i].y;
          acc += std::exp(-(dx * dx + dy * dy) * inv_two_h2);
        }
      } else {
        for (const Point& p : pois) {
          const double dx = center.x - p.x;
          const double dy = center.y - p.y;
          const double d2 = dx * dx + dy * dy;
          if (d2 <= cutoff2) acc += std::exp(-d2 * inv_two_h2);
        }
      }
      raster.at(static_cast<int>(r), c) = acc * norm;
    }
  });
  return raster;
}

std::array<ClassRaster, kNumClasses> normalize_probability(
    const std::array<ClassRaster, kNumClasses>& densities, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    raise(ErrorCode::InvalidParams, "epsilon must be > 0");
  }
  for (int c = 1; c < kNumClasses; ++c) {
    if (!(densities[c].grid == densities[0].grid)) {
      raise(ErrorCode::GridMismatch, "density rasters do not share grid geometry");
    }
  }
  std::array<ClassRaster, kNumClasses> prob = densities;
  const std::size_t n = densities[0].cells.size();
  for (int c = 0; c < kNumClasses; ++c) {
    prob[c].kind = RasterKind::Probability;
    prob[c].cls = static_cast<FunctionClass>(c + 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (int c = 0; c < kNumClasses; ++c) total += densities[c].cells[i];
    // Share with the smoothing term, as printed ...
    std::array<double, kNumClasses> share;
    double share_sum = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
      share[c] = densities[c].cells[i] / (total + epsilon);
      share_sum += share[c];
    }
    // ... then the renormalization pass; zero-density cells go uniform.
    for (int c = 0; c < kNumClasses; ++c) {
      prob[c].cells[i] = share_sum > 0.0 ? share[c] / share_sum : 1.0 / kNumClasses;
    }
  }
  return prob;
}

ClassScores zonal_mean(const std::array<ClassRaster, kNumClasses>& probability,
                       const BuildingFootprint& building) {
  for (int c = 1; c < kNumClasses; ++c) {
    if (!(probability[c].grid == probability[0].grid)) {
      raise(ErrorCode::GridMismatch, "probability rasters do not share grid geometry");
    }
  }
  const GridGeometry& grid = probability[0].grid;
  const BoundingBox cover = grid.extent();
  const BoundingBox box = bbox_of(building.polygon);
  if (box.min_x < cover.min_x || box.min_y < cover.min_y || box.max_x > cover.max_x ||
      box.max_y > cover.max_y) {
    raise(ErrorCode::OutOfExtent,
          "building " + building.id + " footprint is outside the raster extent");
  }

  const auto col_of = [&](double x) {
    return std::clamp(static_cast<int>(std::floor((x - grid.origin.x) / grid.cell_size)), 0,
                      grid.cols - 1);
  };
  const auto row_of = [&](double y) {
    return std::clamp(static_cast<int>(std::floor((y - grid.origin.y) / grid.cell_size)), 0,
                      grid.rows - 1);
  };

  ClassScores sums{};
  std::int64_t covered = 0;
  const int r_lo = row_of(box.min_y), r_hi = row_of(box.max_y);
  const int c_lo = col_of(box.min_x), c_hi = col_of(box.max_x);
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      if (!contains(building.polygon, grid.cell_center(r, c))) continue;
      for (int k = 0; k < kNumClasses; ++k) sums.values[k] += probability[k].at(r, c);
      ++covered;
    }
  }
  if (covered == 0) {
    // Building smaller than a cell: sample the cell holding the centroid.
    const int r = row_of(building.centroid.y);
    const int c = col_of(building.centroid.x);
    for (int k = 0; k < kNumClasses; ++k) sums.values[k] = probability[k].at(r, c);
    covered = 1;
  }
  ClassScores mean{};
  for (int k = 0; k < kNumClasses; ++k) {
    mean.values[k] = sums.values[k] / static_cast<double>(covered);
  }
  const double total = mean.sum();
  if (total > 0.0) {
    for (int k = 0; k < kNumClasses; ++k) mean.values[k] /= total;
  }
  return mean;
}

std::string raster_to_text(const ClassRaster& raster) {
  std::ostringstream os;
  char buf[64];
  os << "ubf raster v1\n";
  os << "class: " << class_name(raster.cls) << "\n";
  os << "kind: " << (raster.kind == RasterKind::Density ? "Density" : "Probability") << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g %.17g", raster.grid.origin.x, raster.grid.origin.y);
  os << "origin: " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", raster.grid.cell_size);
  os << "cell_size: " << buf << "\n";
  os << "rows: " << raster.grid.rows << "\n";
  os << "cols: " << raster.grid.cols << "\n";
  for (int r = 0; r < raster.grid.rows; ++r) {
    for (int c = 0; c < raster.grid.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", raster.at(r, c));
      os << buf << (c + 1 == raster.grid.cols ? "" : " ");
    }
    os << "\n";
  }
  return os.str();
}

ClassRaster raster_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  const auto expect_line = [&](const std::string& what) {
    if (!std::getline(in, line)) {
      raise(ErrorCode::ParseError, "raster text truncated, expected " + what);
    }
    return line;
  };
  if (expect_line("magic") != "ubf raster v1") {
    raise(ErrorCode::ParseError, "not a ubf raster file");
  }
  const auto value_of = [&](const std::string& key) {
    expect_line(key);
    const std::string prefix = key + ": ";
    if (line.rfind(prefix, 0) != 0) {
      raise(ErrorCode::ParseError, "raster header missing '" + key + "'");
    }
    return line.substr(prefix.size());
  };
  ClassRaster raster;
  const auto cls = class_from_string(value_of("class"));
  if (!cls) raise(ErrorCode::ParseError, "raster header has unknown class");
  raster.cls = *cls;
  const std::string kind = value_of("kind");
  raster.kind = kind == "Density" ? RasterKind::Density : RasterKind::Probability;
  {
    std::istringstream os(value_of("origin"));
    os >> raster.grid.origin.x >> raster.grid.origin.y;
  }
  raster.grid.cell_size = std::stod(value_of("cell_size"));
  raster.grid.rows = std::stoi(value_of("rows"));
  raster.grid.cols = std::stoi(value_of("cols"));
  if (raster.grid.rows <= 0 || raster.grid.cols <= 0) {
    raise(ErrorCode::ParseError, "raster dimensions must be positive");
  }
  raster.cells.resize(static_cast<std::size_t>(raster.grid.rows) * raster.grid.cols);
  for (double& v : raster.cells) {
    if (!(in >> v)) {
      raise(ErrorCode::ParseError, "raster data truncated");
    }
  }
  return raster;
}

}  // namespace ubf
