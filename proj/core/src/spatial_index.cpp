#include "ubf/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ubf/errors.hpp"
#include "ubf/geometry.hpp"

namespace ubf {

namespace {

struct GridShape {
  double origin_x, origin_y, cell;
  int cols, rows;
};

GridShape shape_for(double min_x, double min_y, double max_x, double max_y,
                    std::size_t n, double min_cell) {
  const double w = std::max(max_x - min_x, 0.0);
  const double h = std::max(max_y - min_y, 0.0);
  double cell = std::sqrt((w * h) / static_cast<double>(std::max<std::size_t>(n, 1)));
  cell = std::max({cell, min_cell, 1e-9});
  int cols = std::max(1, static_cast<int>(std::floor(w / cell)) + 1);
  int rows = std::max(1, static_cast<int>(std::floor(h / cell)) + 1);
  // Bound the table so pathological extents cannot blow up memory.
  while (static_cast<std::int64_t>(cols) * rows > 8'000'000) {
    cell *= 2.0;
    cols = std::max(1, static_cast<int>(std::floor(w / cell)) + 1);
    rows = std::max(1, static_cast<int>(std::floor(h / cell)) + 1);
  }
  return {min_x, min_y, cell, cols, rows};
}

}  // namespace

int PointIndex::col_of(double x) const {
  const int c = static_cast<int>(std::floor((x - origin_x_) / cell_));
  return std::clamp(c, 0, cols_ - 1);
}

int PointIndex::row_of(double y) const {
  const int r = static_cast<int>(std::floor((y - origin_y_) / cell_));
  return std::clamp(r, 0, rows_ - 1);
}

PointIndex PointIndex::build(std::span<const Point> points) {
  PointIndex idx;
  idx.points_.assign(points.begin(), points.end());
  if (idx.points_.empty()) {
    idx.bucket_start_.assign(2, 0);
    return idx;
  }
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (const Point& p : idx.points_) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const GridShape g = shape_for(min_x, min_y, max_x, max_y, idx.points_.size(), 0.0);
  idx.origin_x_ = g.origin_x;
  idx.origin_y_ = g.origin_y;
  idx.cell_ = g.cell;
  idx.cols_ = g.cols;
  idx.rows_ = g.rows;

  const std::size_t n_buckets = static_cast<std::size_t>(idx.cols_) * idx.rows_;
  std::vector<std::uint32_t> counts(n_buckets, 0);
  const auto bucket_of = [&](const Point& p) {
    return static_cast<std::size_t>(idx.row_of(p.y)) * idx.cols_ + idx.col_of(p.x);
  };
  for (const Point& p : idx.points_) counts[bucket_of(p)]++;
  idx.bucket_start_.resize(n_buckets + 1, 0);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    idx.bucket_start_[b + 1] = idx.bucket_start_[b] + counts[b];
  }
  idx.items_.resize(idx.points_.size());
  std::vector<std::uint32_t> cursor(idx.bucket_start_.begin(), idx.bucket_start_.end() - 1);
  for (std::uint32_t i = 0; i < idx.points_.size(); ++i) {
    idx.items_[cursor[bucket_of(idx.points_[i])]++] = i;
  }
  return idx;
}

std::vector<Neighbor> PointIndex::knn_impl(Point q, std::size_t k,
                                           std::int64_t exclude) const {
  if (empty()) {
    raise(ErrorCode::EmptyIndex, "k_nearest on an empty index");
  }
  if (k == 0) {
    raise(ErrorCode::InvalidParams, "k_nearest requires k >= 1");
  }
  const int qc = col_of(q.x);
  const int qr = row_of(q.y);
  const int max_ring = std::max({qc, cols_ - 1 - qc, qr, rows_ - 1 - qr});

  std::vector<Neighbor> candidates;
  const auto scan_bucket = [&](int r, int c) {
    const std::size_t b = static_cast<std::size_t>(r) * cols_ + c;
    for (std::uint32_t pos = bucket_start_[b]; pos < bucket_start_[b + 1]; ++pos) {
      const std::uint32_t i = items_[pos];
      if (exclude >= 0 && i == static_cast<std::uint32_t>(exclude)) continue;
      candidates.push_back({i, euclidean(q, points_[i])});
    }
  };

  double kth_best = std::numeric_limits<double>::infinity();
  for (int ring = 0; ring <= max_ring; ++ring) {
    const int r_lo = qr - ring, r_hi = qr + ring;
    const int c_lo = qc - ring, c_hi = qc + ring;
    for (int c = std::max(0, c_lo); c <= std::min(cols_ - 1, c_hi); ++c) {
      if (r_lo >= 0) scan_bucket(r_lo, c);
      if (r_hi < rows_ && ring > 0) scan_bucket(r_hi, c);
    }
    for (int r = std::max(0, r_lo + 1); r <= std::min(rows_ - 1, r_hi - 1); ++r) {
      if (c_lo >= 0) scan_bucket(r, c_lo);
      if (c_hi < cols_ && ring > 0) scan_bucket(r, c_hi);
    }
    if (candidates.size() >= k) {
      std::nth_element(candidates.begin(), candidates.begin() + (k - 1), candidates.end(),
                       [](const Neighbor& a, const Neighbor& b) {
                         return a.distance < b.distance ||
                                (a.distance == b.distance && a.index < b.index);
                       });
      kth_best = candidates[k - 1].distance;
      // Any point in an unscanned cell is at least ring*cell away.
      if (kth_best <= static_cast<double>(ring) * cell_) break;
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Neighbor& a, const Neighbor& b) {
              return a.distance < b.distance ||
                     (a.distance == b.distance && a.index < b.index);
            });
  if (candidates.size() > k) candidates.resize(k);
  return candidates;
}

std::vector<Neighbor> PointIndex::k_nearest(Point q, std::size_t k) const {
  return knn_impl(q, k, -1);
}

std::vector<Neighbor> PointIndex::k_nearest_excluding(Point q, std::size_t k,
                                                      std::uint32_t exclude) const {
  return knn_impl(q, k, static_cast<std::int64_t>(exclude));
}

std::vector<std::uint32_t> PointIndex::within_radius(Point q, double radius) const {
  std::vector<std::uint32_t> out;
  if (empty() || radius < 0.0) return out;
  const int c_lo = col_of(q.x - radius), c_hi = col_of(q.x + radius);
  const int r_lo = row_of(q.y - radius), r_hi = row_of(q.y + radius);
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      const std::size_t b = static_cast<std::size_t>(r) * cols_ + c;
      for (std::uint32_t pos = bucket_start_[b]; pos < bucket_start_[b + 1]; ++pos) {
        const std::uint32_t i = items_[pos];
        if (euclidean(q, points_[i]) <= radius) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> PointIndex::in_rect(const BoundingBox& rect) const {
  std::vector<std::uint32_t> out;
  if (empty()) return out;
  const int c_lo = col_of(rect.min_x), c_hi = col_of(rect.max_x);
  const int r_lo = row_of(rect.min_y), r_hi = row_of(rect.max_y);
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      const std::size_t b = static_cast<std::size_t>(r) * cols_ + c;
      for (std::uint32_t pos = bucket_start_[b]; pos < bucket_start_[b + 1]; ++pos) {
        const std::uint32_t i = items_[pos];
        if (rect.contains(points_[i])) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int PolygonIndex::col_of(double x) const {
  const int c = static_cast<int>(std::floor((x - origin_x_) / cell_));
  return std::clamp(c, 0, cols_ - 1);
}

int PolygonIndex::row_of(double y) const {
  const int r = static_cast<int>(std::floor((y - origin_y_) / cell_));
  return std::clamp(r, 0, rows_ - 1);
}

PolygonIndex PolygonIndex::build(std::span<const BuildingFootprint> buildings) {
  PolygonIndex idx;
  idx.boxes_.reserve(buildings.size());
  for (const auto& b : buildings) idx.boxes_.push_back(bbox_of(b.polygon));
  if (idx.boxes_.empty()) {
    idx.bucket_start_.assign(2, 0);
    return idx;
  }
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  double mean_dim = 0.0;
  for (const BoundingBox& b : idx.boxes_) {
    min_x = std::min(min_x, b.min_x);
    min_y = std::min(min_y, b.min_y);
    max_x = std::max(max_x, b.max_x);
    max_y = std::max(max_y, b.max_y);
    mean_dim += std::max(b.width(), b.height());
  }
  mean_dim /= static_cast<double>(idx.boxes_.size());
  // Cells no smaller than a typical footprint keep per-box bucket fan-out small.
  const GridShape g =
      shape_for(min_x, min_y, max_x, max_y, idx.boxes_.size(), 2.0 * mean_dim);
  idx.origin_x_ = g.origin_x;
  idx.origin_y_ = g.origin_y;
  idx.cell_ = g.cell;
  idx.cols_ = g.cols;
  idx.rows_ = g.rows;

  const std::size_t n_buckets = static_cast<std::size_t>(idx.cols_) * idx.rows_;
  std::vector<std::uint32_t> counts(n_buckets, 0);
  for (const BoundingBox& b : idx.boxes_) {
    const int c_lo = idx.col_of(b.min_x), c_hi = idx.col_of(b.max_x);
    const int r_lo = idx.row_of(b.min_y), r_hi = idx.row_of(b.max_y);
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int c = c_lo; c <= c_hi; ++c) {
        counts[static_cast<std::size_t>(r) * idx.cols_ + c]++;
      }
    }
  }
  idx.bucket_start_.resize(n_buckets + 1, 0);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    idx.bucket_start_[b + 1] = idx.bucket_start_[b] + counts[b];
  }
  idx.items_.resize(idx.bucket_start_.back());
  std::vector<std::uint32_t> cursor(idx.bucket_start_.begin(), idx.bucket_start_.end() - 1);
  for (std::uint32_t i = 0; i < idx.boxes_.size(); ++i) {
    const BoundingBox& b = idx.boxes_[i];
    const int c_lo = idx.col_of(b.min_x), c_hi = idx.col_of(b.max_x);
    const int r_lo = idx.row_of(b.min_y), r_hi = idx.row_of(b.max_y);
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int c = c_lo; c <= c_hi; ++c) {
        idx.items_[cursor[static_cast<std::size_t>(r) * idx.cols_ + c]++] = i;
      }
    }
  }
  return idx;
}

std::vector<std::uint32_t> PolygonIndex::candidates_in_rect(const BoundingBox& rect) const {
  std::vector<std::uint32_t> out;
  if (empty()) return out;
  const int c_lo = col_of(rect.min_x), c_hi = col_of(rect.max_x);
  const int r_lo = row_of(rect.min_y), r_hi = row_of(rect.max_y);
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      const std::size_t b = static_cast<std::size_t>(r) * cols_ + c;
      out.insert(out.end(), items_.begin() + bucket_start_[b],
                 items_.begin() + bucket_start_[b + 1]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](std::uint32_t i) { return !boxes_[i].intersects(rect); });
  return out;
}

std::vector<std::uint32_t> PolygonIndex::candidates_near(Point p, double radius) const {
  return candidates_in_rect({p.x - radius, p.y - radius, p.x + radius, p.y + radius});
}

}  // namespace ubf
