#include "xfrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "xfrac/error.hpp"

namespace xfrac {

namespace {

constexpr double kPi = std::numbers::pi;

double point_segment_distance(const Point& x, const Point& a, const Point& b, double* t_out = nullptr) {
  const Point d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (x - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return (x - (a + t * d)).norm();
}

// CCW angle from direction a to direction b in [0, 2pi).
double ccw_angle(const Point& a, const Point& b) {
  double ang = std::atan2(cross(a, b), a.dot(b));
  if (ang < 0.0) ang += 2.0 * kPi;
  return ang;
}

}  // namespace

double shoelace_area(std::span<const Point> v) {
  const std::size_t n = v.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += cross(v[i], v[(i + 1) % n]);
  return 0.5 * s;
}

double bbox_diagonal(std::span<const Point> v) {
  if (v.empty()) return 0.0;
  Point lo = v[0], hi = v[0];
  for (const auto& p : v) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3)
    throw Error(ErrorCode::degenerate_geometry, "polygon needs at least 3 vertices");
}

bool Polygon::is_ccw() const { return shoelace_area(vertices_) > 0.0; }

Polygon Polygon::normalized() const {
  if (is_ccw()) return *this;
  std::vector<Point> v(vertices_.rbegin(), vertices_.rend());
  return Polygon(std::move(v));
}

Point Polygon::centroid() const {
  const std::size_t n = vertices_.size();
  double a = 0.0;
  Point c = Point::Zero();
  // Shift to the first vertex for round-off.
  const Point o = vertices_[0];
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = vertices_[i] - o;
    const Point q = vertices_[(i + 1) % n] - o;
    const double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  if (std::abs(a) <= 0.0) return o;
  return o + c / (3.0 * a);
}

Polygon Polygon::rotated(std::size_t first) const {
  std::vector<Point> v(vertices_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = vertices_[(first + i) % v.size()];
  return Polygon(std::move(v));
}

double signed_area(const Polygon& poly) {
  const double a = shoelace_area(poly.vertices());
  const double eps = 1e-8 * poly.diameter();
  if (std::abs(a) < eps * eps || poly.diameter() == 0.0)
    throw Error(ErrorCode::degenerate_geometry, "polygon area below geometric tolerance");
  return a;
}

bool contains(const Polygon& poly, const Point& x) {
  // Non-zero winding rule.
  int wn = 0;
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    const double side = cross(b - a, x - a);
    if (a.y() <= x.y()) {
      if (b.y() > x.y() && side > 0.0) ++wn;
    } else {
      if (b.y() <= x.y() && side < 0.0) --wn;
    }
  }
  return wn != 0;
}

double distance_to_boundary(const Polygon& poly, const Point& x) {
  double d = std::numeric_limits<double>::infinity();
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i)
    d = std::min(d, point_segment_distance(x, v[i], v[(i + 1) % v.size()]));
  return d;
}

std::vector<Triangle> fan_triangulate(const Polygon& poly, double area_tol) {
  std::vector<Triangle> out;
  const auto& v = poly.vertices();
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Triangle t{v[0], v[i], v[i + 1]};
    const double a = 0.5 * cross(t[1] - t[0], t[2] - t[0]);
    if (std::abs(a) <= area_tol) continue;
    if (a < 0.0) return {};
    out.push_back(t);
  }
  return out;
}

std::vector<Triangle> ear_clip(const Polygon& poly) {
  std::vector<Point> v = poly.normalized().vertices();
  const double tol = 1e-14 * poly.diameter() * poly.diameter();
  std::vector<Triangle> out;
  auto inside_tri = [](const Point& p, const Point& a, const Point& b, const Point& c) {
    return cross(b - a, p - a) > 0.0 && cross(c - b, p - b) > 0.0 && cross(a - c, p - c) > 0.0;
  };
  std::size_t guard = 0;
  while (v.size() > 3 && guard++ < 10000) {
    const std::size_t n = v.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = v[(i + n - 1) % n];
      const Point& b = v[i];
      const Point& c = v[(i + 1) % n];
      const double area2 = cross(b - a, c - a);
      if (area2 <= tol) {
        // Collinear vertex with no area: drop it outright.
        if (std::abs(area2) <= tol && (c - a).dot(b - a) > 0.0) {
          v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
          clipped = true;
          break;
        }
        continue;
      }
      bool ear = true;
      for (std::size_t j = 0; j < n && ear; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        if (inside_tri(v[j], a, b, c)) ear = false;
      }
      if (!ear) continue;
      out.push_back({a, b, c});
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped)
      throw Error(ErrorCode::degenerate_geometry, "ear clipping found no ear");
  }
  if (v.size() == 3 && cross(v[1] - v[0], v[2] - v[0]) > tol) out.push_back({v[0], v[1], v[2]});
  return out;
}

Point TipFrame::tangent() const { return {std::cos(angle), std::sin(angle)}; }

Point TipFrame::to_local(const Point& x) const {
  const double c = std::cos(angle), s = std::sin(angle);
  const Point d = x - tip;
  return {c * d.x() + s * d.y(), -s * d.x() + c * d.y()};
}

std::pair<double, double> TipFrame::polar(const Point& x) const {
  const Point l = to_local(x);
  double theta = std::atan2(l.y(), l.x());
  if (theta <= -kPi) theta = kPi;
  return {l.norm(), theta};
}

CrackPath::CrackPath(std::vector<Point> vertices, std::array<bool, 2> tip_flags)
    : vertices_(std::move(vertices)), tip_flags_(tip_flags) {
  if (vertices_.size() < 2)
    throw Error(ErrorCode::degenerate_geometry, "crack path needs at least 2 vertices");
  const double scale = bbox_diagonal(vertices_);
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    if ((vertices_[i + 1] - vertices_[i]).norm() <= 1e-12 * scale || scale == 0.0)
      throw Error(ErrorCode::degenerate_geometry, "zero-length crack segment");
  }
}

const Point& CrackPath::end_point(int end) const {
  return end == 0 ? vertices_.front() : vertices_.back();
}

TipFrame CrackPath::tip_frame(int end) const {
  const std::size_t n = vertices_.size();
  const Point& tip = end == 0 ? vertices_[0] : vertices_[n - 1];
  const Point& prev = end == 0 ? vertices_[1] : vertices_[n - 2];
  const Point d = tip - prev;
  return TipFrame{tip, std::atan2(d.y(), d.x())};
}

double CrackPath::length() const {
  double l = 0.0;
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) l += (vertices_[i + 1] - vertices_[i]).norm();
  return l;
}

CrackPath CrackPath::extended(int end, const Point& p) const {
  std::vector<Point> v = vertices_;
  if (end == 0)
    v.insert(v.begin(), p);
  else
    v.push_back(p);
  return CrackPath(std::move(v), tip_flags_);
}

InterfaceLine::InterfaceLine(Point a_, Point b_, std::array<int, 2> labels_)
    : a(std::move(a_)), b(std::move(b_)), labels(labels_) {
  if ((b - a).norm() <= 0.0)
    throw Error(ErrorCode::degenerate_geometry, "interface line needs two distinct points");
  if (labels[0] == labels[1])
    throw Error(ErrorCode::invalid_argument, "interface region labels must differ");
}

Point InterfaceLine::unit_normal() const {
  const Point d = (b - a).normalized();
  return {-d.y(), d.x()};
}

CrackPath InterfaceLine::as_path(double extent) const {
  const Point d = (b - a).normalized();
  return CrackPath({a - extent * d, b + extent * d}, {false, false});
}

double signed_distance(const Point& x, const InterfaceLine& iface) {
  return (x - iface.a).dot(iface.unit_normal());
}

double distance_to_path(const Point& x, const CrackPath& path) {
  double d = std::numeric_limits<double>::infinity();
  const auto& v = path.vertices();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) d = std::min(d, point_segment_distance(x, v[i], v[i + 1]));
  return d;
}

int side_of_path(const Point& x, const CrackPath& path, double eps) {
  const auto& v = path.vertices();
  const std::size_t nseg = v.size() - 1;
  if (eps <= 0.0) eps = 1e-10 * path.length();

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_seg = 0;
  double best_t = 0.0;
  for (std::size_t i = 0; i < nseg; ++i) {
    const Point d = v[i + 1] - v[i];
    double t = (x - v[i]).dot(d) / d.squaredNorm();
    // The first and last segments continue as rays past the path ends.
    const double lo = i == 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    const double hi = i + 1 == nseg ? std::numeric_limits<double>::infinity() : 1.0;
    t = std::clamp(t, lo, hi);
    const double dist = (x - (v[i] + t * d)).norm();
    if (dist < best) {
      best = dist;
      best_seg = i;
      best_t = t;
    }
  }
  if (best <= eps) throw Error(ErrorCode::on_discontinuity, "point lies on the crack path");

  const bool at_start = best_t <= 0.0 && best_seg > 0;
  const bool at_end = best_t >= 1.0 && best_seg + 1 < nseg;
  if (!at_start && !at_end) {
    const Point d = v[best_seg + 1] - v[best_seg];
    return cross(d, x - v[best_seg]) > 0.0 ? 1 : -1;
  }
  // Closest feature is a kink vertex: the left side is the sector swept CCW
  // from the outgoing tangent to the reversed incoming tangent.
  const std::size_t k = at_start ? best_seg : best_seg + 1;
  const Point t_in = v[k] - v[k - 1];
  const Point t_out = v[k + 1] - v[k];
  const double phi = ccw_angle(t_out, x - v[k]);
  const double psi = ccw_angle(t_out, -t_in);
  return (phi > 0.0 && phi < psi) ? 1 : -1;
}

namespace {

struct ElementFrame {
  std::array<Point, 4> p;
  double eps;

  // Perimeter parameter in [0, 4) of a boundary point.
  double perimeter_param(const Point& x) const {
    double best = std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      double t = 0.0;
      const double d = point_segment_distance(x, p[k], p[(k + 1) % 4], &t);
      if (d < best - 1e-15) {
        best = d;
        s = k + t;
      }
    }
    if (s >= 4.0) s -= 4.0;
    return s;
  }

  double boundary_distance(const Point& x) const {
    double d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) d = std::min(d, point_segment_distance(x, p[k], p[(k + 1) % 4]));
    return d;
  }

  // Signed inward offsets: all >= -tol means inside the closed element.
  bool inside(const Point& x, double tol) const {
    for (int k = 0; k < 4; ++k) {
      const Point e = p[(k + 1) % 4] - p[k];
      if (cross(e, x - p[k]) / e.norm() < -tol) return false;
    }
    return true;
  }

  Point snap(const Point& x, double factor = 1.0) const {
    const double tol = factor * eps;
    for (const auto& q : p)
      if ((x - q).norm() <= tol) return q;
    for (int k = 0; k < 4; ++k) {
      double t = 0.0;
      const Point& a = p[k];
      const Point& b = p[(k + 1) % 4];
      if (point_segment_distance(x, a, b, &t) <= tol) return a + t * (b - a);
    }
    return x;
  }

  // Parameter range of a + t(b - a) inside the closed element (Cyrus-Beck).
  std::optional<std::pair<double, double>> clip(const Point& a, const Point& b) const {
    double t0 = 0.0, t1 = 1.0;
    const Point d = b - a;
    for (int k = 0; k < 4; ++k) {
      const Point e = p[(k + 1) % 4] - p[k];
      const Point n = Point(-e.y(), e.x()) / e.norm();  // inward
      const double num = n.dot(a - p[k]) + eps;
      const double den = n.dot(d);
      if (std::abs(den) < 1e-300) {
        if (num < 0.0) return std::nullopt;
        continue;
      }
      const double t = -num / den;
      if (den > 0.0)
        t0 = std::max(t0, t);
      else
        t1 = std::min(t1, t);
      if (t0 > t1) return std::nullopt;
    }
    return std::make_pair(t0, t1);
  }

  // Exit point of the ray x + s*dir (x inside) through the boundary.
  Point ray_exit(const Point& x, const Point& dir) const {
    double s_exit = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
      const Point e = p[(k + 1) % 4] - p[k];
      const Point n = Point(-e.y(), e.x()) / e.norm();
      const double den = n.dot(dir);
      if (den >= -1e-300) continue;
      const double s = -n.dot(x - p[k]) / den;
      s_exit = std::min(s_exit, std::max(s, 0.0));
    }
    return snap(x + s_exit * dir);
  }
};

void dedupe(std::vector<Point>& v, double eps) {
  std::vector<Point> out;
  for (const auto& q : v)
    if (out.empty() || (q - out.back()).norm() > eps) out.push_back(q);
  while (out.size() > 1 && (out.front() - out.back()).norm() <= eps) out.pop_back();
  v = std::move(out);
}

}  // namespace

bool element_holds_tip(std::span<const Point, 4> element, const CrackPath& path, int end) {
  if (!path.is_tip(end)) return false;
  ElementFrame f{{element[0], element[1], element[2], element[3]}, 0.0};
  const double diag = std::max((f.p[2] - f.p[0]).norm(), (f.p[3] - f.p[1]).norm());
  f.eps = 1e-8 * diag;
  const Point tip = f.snap(path.end_point(end));
  if (!f.inside(tip, f.eps)) return false;
  const TipFrame frame = path.tip_frame(end);
  // probe shorter than the snap tolerance, so an unsnapped tip close to an
  // edge still belongs to the element it sits in
  return f.inside(tip + 0.5 * f.eps * frame.tangent(), -1e-10 * diag);
}

ClipResult clip_element(std::span<const Point, 4> element, const CrackPath& path) {
  ElementFrame f{{element[0], element[1], element[2], element[3]}, 0.0};
  const double diag = std::max((f.p[2] - f.p[0]).norm(), (f.p[3] - f.p[1]).norm());
  f.eps = 1e-8 * diag;
  const double elem_area = shoelace_area(f.p);

  ClipResult uncut;
  uncut.kind = CutKind::uncut;
  uncut.pieces.emplace_back(std::vector<Point>(f.p.begin(), f.p.end()));
  uncut.sides.push_back(0);

  std::vector<Point> pv = path.vertices();
  for (auto& q : pv) q = f.snap(q);

  // Pieces of the polyline inside the closed element, chained in path order.
  std::vector<std::vector<Point>> chains;
  std::vector<std::array<bool, 2>> chain_has_end;
  for (std::size_t i = 0; i + 1 < pv.size(); ++i) {
    const auto range = f.clip(pv[i], pv[i + 1]);
    if (!range) continue;
    const Point d = pv[i + 1] - pv[i];
    // clipped ends may sit up to eps outside the element
    const Point a = range->first <= 0.0 ? pv[i] : f.snap(pv[i] + range->first * d, 4.0);
    const Point b = range->second >= 1.0 ? pv[i + 1] : f.snap(pv[i] + range->second * d, 4.0);
    const bool starts_path = i == 0 && range->first <= 0.0;
    const bool ends_path = i + 2 == pv.size() && range->second >= 1.0;
    if ((b - a).norm() <= f.eps && !starts_path && !ends_path) continue;
    if (!chains.empty() && (chains.back().back() - a).norm() <= f.eps) {
      chains.back().push_back(b);
      chain_has_end.back()[1] = chain_has_end.back()[1] || ends_path;
    } else {
      chains.push_back({a, b});
      chain_has_end.push_back({starts_path, ends_path});
    }
  }
  for (auto& c : chains) dedupe(c, f.eps);

  std::vector<int> tip_ends;
  for (int end = 0; end < 2; ++end)
    if (element_holds_tip(element, path, end)) tip_ends.push_back(end);

  // Drop chains that only touch the element (a point contact or a run along
  // an edge) unless a tip sits in them.
  std::vector<std::vector<Point>> cuts;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    auto chain = chains[c];
    bool holds_tip = false;
    for (int end : tip_ends) {
      const bool at_front = end == 0 && chain_has_end[c][0];
      const bool at_back = end == 1 && chain_has_end[c][1];
      holds_tip = holds_tip || at_front || at_back;
    }
    bool on_boundary = true;
    for (std::size_t k = 0; k + 1 < chain.size() && on_boundary; ++k) {
      const Point mid = 0.5 * (chain[k] + chain[k + 1]);
      on_boundary = f.boundary_distance(mid) <= f.eps;
    }
    if (chain.size() == 1 || (on_boundary && holds_tip)) {
      // Point contact (or a graze along an edge ending at the tip): only a
      // tip sitting on the boundary produces a cut, continued forward along
      // its tangent.
      if (!holds_tip) continue;
      const int end = chain_has_end[c][1] ? 1 : 0;
      const Point t = end == 1 ? chain.back() : chain.front();
      chain = {t, f.ray_exit(t, path.tip_frame(end).tangent())};
      if (end == 0) std::reverse(chain.begin(), chain.end());
    } else {
      if (on_boundary && !holds_tip) continue;
      // Interior chain ends are continued along the path tangent to the boundary.
      if (f.boundary_distance(chain.front()) > f.eps) {
        const Point dir = (chain.front() - chain[1]).normalized();
        chain.insert(chain.begin(), f.ray_exit(chain.front(), dir));
      }
      if (f.boundary_distance(chain.back()) > f.eps) {
        const Point dir = (chain.back() - chain[chain.size() - 2]).normalized();
        chain.push_back(f.ray_exit(chain.back(), dir));
      }
    }
    dedupe(chain, f.eps);
    if (chain.size() >= 2) cuts.push_back(std::move(chain));
  }

  if (cuts.empty()) {
    if (!tip_ends.empty())
      throw Error(ErrorCode::degenerate_geometry, "tip element without a resolvable cut");
    return uncut;
  }
  if (cuts.size() > 1)
    throw Error(ErrorCode::unsupported_configuration, "crack path cuts an element more than once");

  const std::vector<Point>& cut = cuts.front();
  const Point P = cut.front();
  const Point Q = cut.back();
  const double sP = f.perimeter_param(P);
  const double sQ = f.perimeter_param(Q);

  auto nodes_between = [&](double from, double to) {
    // Element nodes strictly between perimeter params `from` and `to`, CCW.
    std::vector<std::pair<double, Point>> out;
    const double span = std::fmod(to - from + 8.0, 4.0);
    for (int k = 0; k < 4; ++k) {
      const double c = std::fmod(k - from + 8.0, 4.0);
      const double tol = 1e-12;
      if (c > tol && c < span - tol) out.emplace_back(c, f.p[k]);
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    std::vector<Point> pts;
    for (auto& [c, q] : out) pts.push_back(q);
    return pts;
  };

  std::vector<Point> left(cut.begin(), cut.end());
  for (const auto& q : nodes_between(sQ, sP)) left.push_back(q);
  std::vector<Point> right(cut.rbegin(), cut.rend());
  for (const auto& q : nodes_between(sP, sQ)) right.push_back(q);
  dedupe(left, f.eps);
  dedupe(right, f.eps);

  ClipResult out;
  const double min_area = f.eps * f.eps;
  for (auto [verts, side] : {std::pair{left, 1}, std::pair{right, -1}}) {
    if (verts.size() < 3) continue;
    const double a = shoelace_area(verts);
    if (a < min_area) continue;
    out.pieces.emplace_back(std::move(verts));
    out.sides.push_back(side);
  }
  if (out.pieces.size() < 2) {
    if (!tip_ends.empty())
      throw Error(ErrorCode::degenerate_geometry, "tip element collapsed to a single piece");
    return uncut;
  }

  double total = 0.0;
  for (const auto& piece : out.pieces) total += shoelace_area(piece.vertices());
  if (std::abs(total - elem_area) > 1e-10 * std::abs(elem_area))
    throw Error(ErrorCode::degenerate_geometry, "element clipping lost area");

  out.tip_ends = tip_ends;
  out.kind = tip_ends.empty() ? CutKind::split : CutKind::tip;
  if (out.kind == CutKind::tip) {
    const Point t = f.snap(path.end_point(tip_ends.front()));
    for (auto& piece : out.pieces) {
      for (std::size_t k = 0; k < piece.size(); ++k) {
        if ((piece[k] - t).norm() <= f.eps) {
          piece = piece.rotated(k);
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace xfrac
