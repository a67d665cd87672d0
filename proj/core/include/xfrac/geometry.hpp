#pragma once

// Planar predicates used by element clipping and enrichment: polygons,
// crack polylines, straight material interfaces.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace xfrac {

using Point = Eigen::Vector2d;

inline double cross(const Point& a, const Point& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Shoelace sum over an ordered vertex loop; positive for CCW.
double shoelace_area(std::span<const Point> vertices);

// Length of the bounding-box diagonal.
double bbox_diagonal(std::span<const Point> vertices);

class Polygon {
 public:
  Polygon() = default;
  explicit Polygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }

  bool is_ccw() const;
  // CCW copy of this polygon.
  Polygon normalized() const;
  // Area centroid.
  Point centroid() const;
  double diameter() const { return bbox_diagonal(vertices_); }
  // Copy whose vertex list starts at index `first`.
  Polygon rotated(std::size_t first) const;

 private:
  std::vector<Point> vertices_;
};

// Signed shoelace area; throws degenerate_geometry when
// |area| < (1e-8 * bbox diagonal)^2.
double signed_area(const Polygon& poly);

// Winding-number point-in-polygon test on the closed polygon.
bool contains(const Polygon& poly, const Point& x);
double distance_to_boundary(const Polygon& poly, const Point& x);

using Triangle = std::array<Point, 3>;

// Fan from vertex 0. Triangles with |area| below `area_tol` are skipped;
// returns an empty list if any remaining triangle is inverted.
std::vector<Triangle> fan_triangulate(const Polygon& poly, double area_tol);
// Ear clipping for simple CCW polygons (collinear vertices allowed).
std::vector<Triangle> ear_clip(const Polygon& poly);

// Local crack-tip frame: tip position and direction of the crack tangent
// pointing out of the crack (radians).
struct TipFrame {
  Point tip = Point::Zero();
  double angle = 0.0;

  Point tangent() const;
  // Global -> local coordinates (x along the tangent).
  Point to_local(const Point& x) const;
  // Polar coordinates (r, theta) with theta in (-pi, pi].
  std::pair<double, double> polar(const Point& x) const;
};

class CrackPath {
 public:
  // tip_flags[0] marks the first vertex as an active tip, tip_flags[1] the last.
  CrackPath(std::vector<Point> vertices, std::array<bool, 2> tip_flags);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::array<bool, 2>& tip_flags() const { return tip_flags_; }
  bool is_tip(int end) const { return tip_flags_[end]; }
  // end = 0 (first vertex) or 1 (last vertex).
  const Point& end_point(int end) const;
  TipFrame tip_frame(int end) const;
  std::size_t segment_count() const { return vertices_.size() - 1; }
  double length() const;

  // New path with `p` appended after the given end.
  CrackPath extended(int end, const Point& p) const;

 private:
  std::vector<Point> vertices_;
  std::array<bool, 2> tip_flags_;
};

struct InterfaceLine {
  InterfaceLine(Point a, Point b, std::array<int, 2> labels = {1, 2});

  Point a;
  Point b;
  // labels[1] occupies the side the CCW-rotated direction a->b points to.
  std::array<int, 2> labels;

  Point unit_normal() const;
  // Path spanning `extent` beyond both points with no active tips.
  CrackPath as_path(double extent) const;
};

// Perpendicular signed distance, positive on the labels[1] side.
double signed_distance(const Point& x, const InterfaceLine& iface);

// Distance to the polyline itself (no tip extension).
double distance_to_path(const Point& x, const CrackPath& path);

// +1 on the side the CCW-rotated path tangent points to, -1 on the other.
// The path is extended virtually beyond both end points along its end
// tangents. Throws on_discontinuity within `eps` of the extended path.
// eps <= 0 selects 1e-10 times the path length.
int side_of_path(const Point& x, const CrackPath& path, double eps = 0.0);

enum class CutKind { uncut, split, tip };

struct ClipResult {
  CutKind kind = CutKind::uncut;
  std::vector<Polygon> pieces;
  // +1/-1 per piece: side of the (extended) cutting line.
  std::vector<int> sides;
  // Path ends (0/1) whose active tip lies in this element.
  std::vector<int> tip_ends;
};

// Cuts a convex CCW quadrilateral by a crack path. Split elements yield the
// two pieces on either side; in a tip element the cut is continued from the
// tip along the tip tangent to the element boundary, and every piece starts
// at the tip vertex. Path vertices within 1e-8 * element diagonal of an
// element node or edge are snapped onto it.
ClipResult clip_element(std::span<const Point, 4> element, const CrackPath& path);

// True when the active tip `end` of `path` lies in the closed element and the
// path continued beyond it enters the element interior.
bool element_holds_tip(std::span<const Point, 4> element, const CrackPath& path, int end);

}  // namespace xfrac
