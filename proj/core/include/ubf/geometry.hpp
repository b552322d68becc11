#pragma once

#include <string>

#include "ubf/model.hpp"

namespace ubf {

double euclidean(Point a, Point b);
double point_segment_distance(Point p, Point a, Point b);

// Signed ring area (shoelace; positive = counter-clockwise).
double ring_signed_area(const Ring& ring);
// Positive polygon area: |outer| minus the hole areas.
double polygon_area(const Polygon& poly);
Point polygon_centroid(const Polygon& poly);
BoundingBox bbox_of(const Polygon& poly);
bool ring_self_intersects(const Ring& ring);

// Throws DegenerateGeometry unless the outer ring is closed-simple with
// >= 3 distinct vertices and strictly positive area.
void validate_footprint_polygon(const Polygon& poly, const std::string& what);

// Even-odd containment over all rings; boundary points count as contained.
bool contains(const Polygon& poly, Point p);

// Shortest distance from p to the polygon boundary. Returns 0 on the
// boundary and, by convention, 0 for points inside the polygon (a contained
// POI is maximally proximate). Throws DegenerateGeometry.
double boundary_distance(Point p, const Polygon& poly);

// Raw min distance from p to any boundary segment, ignoring containment.
double distance_to_boundary_segments(Point p, const Polygon& poly);

struct Buffer {
  Point center;
  double radius = 0.0;  // meters, > 0
  std::string source_poi_id;
};

// Closed disk: points at exactly radius are inside.
bool within_buffer(const Buffer& b, Point p);

// True when the interiors of two simple polygons overlap by more than tol:
// a proper edge crossing, or a vertex of one strictly inside the other
// (further than tol from its boundary). Shared edges and touching
// boundaries do not count.
bool polygons_interior_overlap(const Polygon& a, const Polygon& b, double tol);

}  // namespace ubf
