#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ubf/model.hpp"

namespace ubf {

struct KdeParams {
  double bandwidth = 200.0;   // Gaussian h, meters
  double cell_size = 20.0;    // raster resolution, meters
  double epsilon = 1e-9;      // smoothing term in the probability share
  double cutoff_sigmas = 8.0; // kernel truncation radius in units of h; 0 = none
  double pad_sigmas = 4.0;    // extent padding in units of h for evaluation

  bool operator==(const KdeParams&) const = default;
};

struct GridGeometry {
  Point origin;  // min corner
  double cell_size = 1.0;
  int rows = 0;
  int cols = 0;

  Point cell_center(int r, int c) const {
    return {origin.x + (c + 0.5) * cell_size, origin.y + (r + 0.5) * cell_size};
  }
  BoundingBox extent() const {
    return {origin.x, origin.y, origin.x + cols * cell_size, origin.y + rows * cell_size};
  }
  bool operator==(const GridGeometry&) const = default;
};

GridGeometry grid_for_extent(const BoundingBox& extent, double cell_size);

enum class RasterKind { Density, Probability };

struct ClassRaster {
  GridGeometry grid;
  FunctionClass cls = FunctionClass::Residential;
  RasterKind kind = RasterKind::Density;
  std::vector<double> cells;  // row-major, rows*cols

  double at(int r, int c) const { return cells[static_cast<std::size_t>(r) * grid.cols + c]; }
  double& at(int r, int c) { return cells[static_cast<std::size_t>(r) * grid.cols + c]; }
};

// Gaussian KDE sampled at cell centers:
//   D(x) = sum_j exp(-|x - x_j|^2 / (2 h^2)) / (2 pi h^2).
// An empty POI list produces an all-zero raster. Kernel contributions
// beyond cutoff_sigmas * h are skipped; at the default 8 sigma the truncated
// tail is below 1e-14 of the peak.
ClassRaster kde_density(std::span<const Point> pois, const KdeParams& params,
                        const BoundingBox& extent, FunctionClass cls, int threads = 1);

// Per-cell probability share P_c = D_c / (sum_k D_k + eps), followed by a
// renormalization pass so each cell's 5-stack sums to exactly 1; all-zero
// cells become the uniform vector.
std::array<ClassRaster, kNumClasses> normalize_probability(
    const std::array<ClassRaster, kNumClasses>& densities, double epsilon);

// Mean of each class surface over cells whose centers fall inside the
// footprint; falls back to the single cell holding the centroid when the
// building is smaller than a cell. Result renormalized to sum 1.
ClassScores zonal_mean(const std::array<ClassRaster, kNumClasses>& probability,
                       const BuildingFootprint& building);

// Text export/import: header {class, kind, origin, cell_size, rows, cols}
// then row-major %.17g values.
std::string raster_to_text(const ClassRaster& raster);
ClassRaster raster_from_text(const std::string& text);

}  // namespace ubf
