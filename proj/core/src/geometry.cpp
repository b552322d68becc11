#include "ubf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ubf/errors.hpp"

namespace ubf {

double euclidean(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double point_segment_distance(Point p, Point a, Point b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  if (len2 == 0.0) return euclidean(p, a);
  double t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const Point proj{a.x + t * abx, a.y + t * aby};
  return euclidean(p, proj);
}

double ring_signed_area(const Ring& ring) {
  const auto& v = ring.vertices;
  const std::size_t n = v.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    acc += v[j].x * v[i].y - v[i].x * v[j].y;
  }
  return 0.5 * acc;
}

double polygon_area(const Polygon& poly) {
  double area = std::abs(ring_signed_area(poly.outer));
  for (const Ring& hole : poly.holes) {
    area -= std::abs(ring_signed_area(hole));
  }
  return area;
}

namespace {

Point ring_centroid(const Ring& ring, double& area_out) {
  const auto& v = ring.vertices;
  const std::size_t n = v.size();
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double cross = v[j].x * v[i].y - v[i].x * v[j].y;
    a += cross;
    cx += (v[j].x + v[i].x) * cross;
    cy += (v[j].y + v[i].y) * cross;
  }
  a *= 0.5;
  area_out = a;
  if (a == 0.0) {
    // Collapsed ring: fall back to the vertex mean.
    Point mean{};
    for (const Point& p : v) {
      mean.x += p.x;
      mean.y += p.y;
    }
    if (!v.empty()) {
      mean.x /= static_cast<double>(v.size());
      mean.y /= static_cast<double>(v.size());
    }
    return mean;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

int orient_sign(Point a, Point b, Point c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return (v > 0.0) - (v < 0.0);
}

bool collinear_point_on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point p3, Point p4) {
  const int o1 = orient_sign(p1, p2, p3);
  const int o2 = orient_sign(p1, p2, p4);
  const int o3 = orient_sign(p3, p4, p1);
  const int o4 = orient_sign(p3, p4, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && collinear_point_on_segment(p1, p2, p3)) return true;
  if (o2 == 0 && collinear_point_on_segment(p1, p2, p4)) return true;
  if (o3 == 0 && collinear_point_on_segment(p3, p4, p1)) return true;
  if (o4 == 0 && collinear_point_on_segment(p3, p4, p2)) return true;
  return false;
}

bool segments_properly_cross(Point p1, Point p2, Point p3, Point p4) {
  const int o1 = orient_sign(p1, p2, p3);
  const int o2 = orient_sign(p1, p2, p4);
  const int o3 = orient_sign(p3, p4, p1);
  const int o4 = orient_sign(p3, p4, p2);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

// Even-odd ray cast against one ring; boundary membership handled elsewhere.
bool ray_cast_inside(Point p, const Ring& ring) {
  const auto& v = ring.vertices;
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x_cross =
          (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool point_on_polygon_boundary(Point p, const Polygon& poly) {
  const auto on_ring = [&](const Ring& r) {
    const auto& v = r.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      if (point_segment_distance(p, v[j], v[i]) == 0.0) return true;
    }
    return false;
  };
  if (on_ring(poly.outer)) return true;
  for (const Ring& h : poly.holes) {
    if (on_ring(h)) return true;
  }
  return false;
}

void check_not_degenerate(const Polygon& poly) {
  if (poly.outer.vertices.size() < 3 || ring_signed_area(poly.outer) == 0.0) {
    raise(ErrorCode::DegenerateGeometry,
          "polygon outer ring has fewer than 3 distinct vertices or zero area");
  }
}

}  // namespace

Point polygon_centroid(const Polygon& poly) {
  double outer_area = 0.0;
  Point c = ring_centroid(poly.outer, outer_area);
  double total = std::abs(outer_area);
  double cx = c.x * total;
  double cy = c.y * total;
  for (const Ring& hole : poly.holes) {
    double a = 0.0;
    const Point hc = ring_centroid(hole, a);
    const double w = std::abs(a);
    cx -= hc.x * w;
    cy -= hc.y * w;
    total -= w;
  }
  if (total == 0.0) return c;
  return {cx / total, cy / total};
}

BoundingBox bbox_of(const Polygon& poly) {
  BoundingBox box{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  const auto extend = [&](const Ring& r) {
    for (const Point& p : r.vertices) {
      box.min_x = std::min(box.min_x, p.x);
      box.min_y = std::min(box.min_y, p.y);
      box.max_x = std::max(box.max_x, p.x);
      box.max_y = std::max(box.max_y, p.y);
    }
  };
  extend(poly.outer);
  for (const Ring& h : poly.holes) extend(h);
  return box;
}

bool ring_self_intersects(const Ring& ring) {
  const auto& v = ring.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a1 = v[i];
    const Point a2 = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent segments
      const Point b1 = v[j];
      const Point b2 = v[(j + 1) % n];
      if (segments_intersect(a1, a2, b1, b2)) return true;
    }
  }
  return false;
}

void validate_footprint_polygon(const Polygon& poly, const std::string& what) {
  const auto& v = poly.outer.vertices;
  if (v.size() < 3) {
    raise(ErrorCode::DegenerateGeometry, what + ": outer ring has fewer than 3 vertices");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == v[(i + 1) % v.size()]) {
      raise(ErrorCode::DegenerateGeometry, what + ": outer ring repeats consecutive vertices");
    }
  }
  if (ring_self_intersects(poly.outer)) {
    raise(ErrorCode::DegenerateGeometry, what + ": outer ring self-intersects");
  }
  if (polygon_area(poly) <= 0.0) {
    raise(ErrorCode::DegenerateGeometry, what + ": polygon area is not strictly positive");
  }
}

bool contains(const Polygon& poly, Point p) {
  check_not_degenerate(poly);
  if (point_on_polygon_boundary(p, poly)) return true;
  bool inside = ray_cast_inside(p, poly.outer);
  for (const Ring& h : poly.holes) {
    if (ray_cast_inside(p, h)) inside = !inside;
  }
  return inside;
}

double distance_to_boundary_segments(Point p, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  const auto scan = [&](const Ring& r) {
    const auto& v = r.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      best = std::min(best, point_segment_distance(p, v[j], v[i]));
    }
  };
  scan(poly.outer);
  for (const Ring& h : poly.holes) scan(h);
  return best;
}

double boundary_distance(Point p, const Polygon& poly) {
  check_not_degenerate(poly);
  const double d = distance_to_boundary_segments(p, poly);
  if (d == 0.0) return 0.0;
  bool inside = ray_cast_inside(p, poly.outer);
  for (const Ring& h : poly.holes) {
    if (ray_cast_inside(p, h)) inside = !inside;
  }
  return inside ? 0.0 : d;
}

bool within_buffer(const Buffer& b, Point p) {
  return euclidean(b.center, p) <= b.radius;
}

bool polygons_interior_overlap(const Polygon& a, const Polygon& b, double tol) {
  if (!bbox_of(a).intersects(bbox_of(b))) return false;

  const auto& av = a.outer.vertices;
  const auto& bv = b.outer.vertices;
  const std::size_t an = av.size();
  const std::size_t bn = bv.size();
  for (std::size_t i = 0, i2 = an - 1; i < an; i2 = i++) {
    for (std::size_t j = 0, j2 = bn - 1; j < bn; j2 = j++) {
      if (segments_properly_cross(av[i2], av[i], bv[j2], bv[j])) return true;
    }
  }
  const auto strictly_inside = [tol](const Polygon& poly, Point p) {
    if (distance_to_boundary_segments(p, poly) <= tol) return false;
    bool inside = ray_cast_inside(p, poly.outer);
    for (const Ring& h : poly.holes) {
      if (ray_cast_inside(p, h)) inside = !inside;
    }
    return inside;
  };
  for (const Point& p : av) {
    if (strictly_inside(b, p)) return true;
  }
  for (const Point& p : bv) {
    if (strictly_inside(a, p)) return true;
  }
  return false;
}

}  // namespace ubf
