#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ubf/model.hpp"

namespace ubf {

struct Neighbor {
  std::uint32_t index;  // position in the indexed sequence
  double distance;
};

// Static uniform-grid index over points. Build once, then read from any
// number of threads. Query results are defined to match a brute-force scan:
// kNN is ordered ascending by (distance, index) and range queries return
// ascending indices. Callers keep their sequences sorted by id, so the
// index tie-break is the spec's ascending-id tie-break.
class PointIndex {
 public:
  PointIndex() = default;

  static PointIndex build(std::span<const Point> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  // k items sorted ascending by (distance, index); all items when the set
  // holds fewer than k. Throws EmptyIndex on an empty index.
  std::vector<Neighbor> k_nearest(Point q, std::size_t k) const;
  // Same, skipping one index (a building is not its own neighbor).
  std::vector<Neighbor> k_nearest_excluding(Point q, std::size_t k,
                                            std::uint32_t exclude) const;

  // Ascending indices of points within the closed disk / closed rectangle.
  std::vector<std::uint32_t> within_radius(Point q, double radius) const;
  std::vector<std::uint32_t> in_rect(const BoundingBox& rect) const;

 private:
  std::vector<Neighbor> knn_impl(Point q, std::size_t k, std::int64_t exclude) const;
  int col_of(double x) const;
  int row_of(double y) const;

  std::vector<Point> points_;
  double origin_x_ = 0.0, origin_y_ = 0.0;
  double cell_ = 1.0;
  int cols_ = 1, rows_ = 1;
  std::vector<std::uint32_t> bucket_start_;  // CSR offsets, rows_*cols_+1
  std::vector<std::uint32_t> items_;         // point indices, ascending per bucket
};

// Grid index over building footprint bounding boxes. Queries return
// candidate sets (bbox-overlap tested, exact geometry up to the caller),
// ascending by index.
class PolygonIndex {
 public:
  PolygonIndex() = default;

  static PolygonIndex build(std::span<const BuildingFootprint> buildings);

  std::size_t size() const { return boxes_.size(); }
  bool empty() const { return boxes_.empty(); }

  std::vector<std::uint32_t> candidates_in_rect(const BoundingBox& rect) const;
  std::vector<std::uint32_t> candidates_near(Point p, double radius) const;
  const BoundingBox& bbox(std::uint32_t index) const { return boxes_[index]; }

 private:
  int col_of(double x) const;
  int row_of(double y) const;

  std::vector<BoundingBox> boxes_;
  double origin_x_ = 0.0, origin_y_ = 0.0;
  double cell_ = 1.0;
  int cols_ = 1, rows_ = 1;
  std::vector<std::uint32_t> bucket_start_;
  std::vector<std::uint32_t> items_;
};

}  // namespace ubf
