#pragma once

// Shared fixture helpers for the test suites.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "ubf/geometry.hpp"
#include "ubf/model.hpp"
#include "ubf/rng.hpp"
#include "ubf/scene.hpp"

namespace test_support {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ubf_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline ubf::BuildingFootprint rect_building(std::string id, double x0, double y0,
                                            double x1, double y1) {
  ubf::BuildingFootprint b;
  b.id = std::move(id);
  b.polygon.outer.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  b.centroid = ubf::polygon_centroid(b.polygon);
  return b;
}

inline ubf::PoiRecord poi_at(std::string id, double x, double y, ubf::FunctionClass cls,
                             bool high_level = false, double radius = 0.0) {
  ubf::PoiRecord p;
  p.id = std::move(id);
  p.location = {x, y};
  p.raw_category = std::string(ubf::class_name(cls));
  p.function_class = cls;
  p.is_high_level = high_level;
  if (high_level) p.buffer_radius = radius;
  return p;
}

// Assembles a Scene with the same invariants ingest guarantees: features
// sorted by id, extent covering everything, block arrays sized.
inline ubf::Scene make_scene(std::vector<ubf::BuildingFootprint> buildings,
                             std::vector<ubf::PoiRecord> pois, double grid_size = 500.0) {
  ubf::Scene scene;
  std::sort(buildings.begin(), buildings.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(pois.begin(), pois.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  scene.buildings = std::move(buildings);
  scene.pois = std::move(pois);
  scene.block_mode.grid_size = grid_size;
  double inf = std::numeric_limits<double>::infinity();
  ubf::BoundingBox ext{inf, inf, -inf, -inf};
  const auto extend = [&ext](const ubf::BoundingBox& b) {
    ext.min_x = std::min(ext.min_x, b.min_x);
    ext.min_y = std::min(ext.min_y, b.min_y);
    ext.max_x = std::max(ext.max_x, b.max_x);
    ext.max_y = std::max(ext.max_y, b.max_y);
  };
  for (const auto& b : scene.buildings) extend(ubf::bbox_of(b.polygon));
  for (const auto& p : scene.pois) {
    extend({p.location.x, p.location.y, p.location.x, p.location.y});
  }
  scene.extent = ext;
  scene.poi_block.assign(scene.pois.size(), ubf::kNoBlock);
  scene.building_block.assign(scene.buildings.size(), ubf::kNoBlock);
  return scene;
}

// Star-shaped polygon around a center: always simple.
inline ubf::Polygon random_star_polygon(ubf::SplitMix64& rng, double cx, double cy,
                                        double r_min, double r_max, int vertices = 8) {
  ubf::Polygon poly;
  for (int i = 0; i < vertices; ++i) {
    const double angle = (2.0 * 3.14159265358979323846 * i) / vertices;
    const double r = rng.next_range(r_min, r_max);
    poly.outer.vertices.push_back({cx + r * std::cos(angle), cy + r * std::sin(angle)});
  }
  return poly;
}

inline ubf::Point random_point(ubf::SplitMix64& rng, const ubf::BoundingBox& box) {
  return {rng.next_range(box.min_x, box.max_x), rng.next_range(box.min_y, box.max_y)};
}

}  // namespace test_support
