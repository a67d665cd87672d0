#include "xfrac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <Eigen/LU>

#include "xfrac/error.hpp"
#include "xfrac/gauss.hpp"
#include "xfrac/mesh.hpp"

namespace xfrac {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::standard: return "standard";
    case Scheme::subcell: return "subcell";
    case Scheme::sccm: return "sccm";
  }
  return "unknown";
}

std::string_view to_string(DiskRuleKind r) {
  return r == DiskRuleKind::midpoint ? "midpoint" : "chebyshev";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "sccm") return Scheme::sccm;
  if (s == "subcell") return Scheme::subcell;
  if (s == "standard") return Scheme::standard;
  throw Error(ErrorCode::invalid_argument, "unknown quadrature scheme '" + std::string(s) + "'");
}

DiskRuleKind parse_disk_rule(std::string_view s) {
  if (s == "midpoint") return DiskRuleKind::midpoint;
  if (s == "chebyshev") return DiskRuleKind::chebyshev;
  throw Error(ErrorCode::invalid_argument, "unknown disk rule '" + std::string(s) + "'");
}

double QuadratureSet::weight_sum() const {
  double s = 0.0;
  for (const auto& p : points) s += p.w;
  return s;
}

QuadratureSet standard_rule(std::span<const Point, 4> elem, int id) {
  const Rule1d g = gauss_legendre(2);
  QuadratureSet q;
  q.element = id;
  q.scheme = Scheme::standard;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const Point xi(g.nodes[i], g.nodes[j]);
      const double w = g.weights[i] * g.weights[j] * jacobian(elem, xi).determinant();
      q.points.push_back({xi, parent_to_physical(elem, xi), w});
    }
  }
  return q;
}

namespace {

double element_area_tol(std::span<const Point, 4> elem) {
  const double eps = 1e-8 * bbox_diagonal(elem);
  return eps * eps;
}

std::vector<Triangle> triangulate(const Polygon& piece, double area_tol) {
  auto tris = fan_triangulate(piece, area_tol);
  if (tris.empty()) {
    tris.clear();
    for (const auto& t : ear_clip(piece))
      if (std::abs(cross(t[1] - t[0], t[2] - t[0])) > 2.0 * area_tol) tris.push_back(t);
  }
  return tris;
}

}  // namespace

int subcell_triangle_count(std::span<const Polygon> pieces, double area_tol) {
  int n = 0;
  for (const auto& p : pieces) n += static_cast<int>(triangulate(p, area_tol).size());
  return n;
}

QuadratureSet subcell_rule(std::span<const Point, 4> elem, std::span<const Polygon> pieces, int id) {
  const double tol = element_area_tol(elem);
  const auto& rule = triangle_rule13();
  QuadratureSet q;
  q.element = id;
  q.scheme = Scheme::subcell;
  for (const auto& piece : pieces) {
    for (const auto& t : triangulate(piece, tol)) {
      const double area = 0.5 * cross(t[1] - t[0], t[2] - t[0]);
      for (const auto& tp : rule) {
        const Point x = (1.0 - tp.l1 - tp.l2) * t[0] + tp.l1 * t[1] + tp.l2 * t[2];
        q.points.push_back({physical_to_parent(elem, x), x, tp.weight * area});
      }
    }
  }
  return q;
}

std::vector<RuleSize> tip_point_budget(int target, std::span<const double> areas, DiskRuleKind rule) {
  if (target < 1) throw Error(ErrorCode::invalid_argument, "point budget must be positive");
  if (areas.empty()) return {};
  const double total = std::accumulate(areas.begin(), areas.end(), 0.0);
  std::vector<RuleSize> out;
  for (double a : areas) {
    const double t = target * (total > 0.0 ? a / total : 1.0 / static_cast<double>(areas.size()));
    RuleSize s;
    s.n_r = std::max(1, static_cast<int>(std::lround(std::sqrt(t / 2.0))));
    const int min_t = rule == DiskRuleKind::chebyshev ? 2 : 1;
    s.n_t = std::max(min_t, static_cast<int>(std::lround(t / s.n_r)));
    out.push_back(s);
  }
  return out;
}

DiskRule make_disk_rule(DiskRuleKind rule, const RuleSize& size) {
  return rule == DiskRuleKind::midpoint ? midpoint_disk_rule(size.n_r, size.n_t)
                                        : chebyshev_disk_rule(size.n_r, size.n_t);
}

QuadratureSet sccm_rule(std::span<const Point, 4> elem, std::span<const Polygon> pieces, int target_points,
                        DiskRuleKind rule, const ScOptions& sc, int id) {
  std::vector<double> areas;
  for (const auto& p : pieces) areas.push_back(std::abs(shoelace_area(p.vertices())));
  const auto sizes = tip_point_budget(target_points, areas, rule);

  QuadratureSet q;
  q.element = id;
  q.scheme = Scheme::sccm;
  try {
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const ConformalMap map = solve_parameter_problem(pieces[k], sc);
      for (const auto& wp : polygon_quadrature(map, make_disk_rule(rule, sizes[k])))
        q.points.push_back({physical_to_parent(elem, wp.x), wp.x, wp.w});
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::crowding && e.code() != ErrorCode::solver_failure &&
        e.code() != ErrorCode::out_of_element)
      throw;
    std::ostringstream msg;
    msg << "element " << id << ": SC quadrature failed (" << e.what() << "); using subcells";
    warn(msg.str());
    return subcell_rule(elem, pieces, id);
  }
  return q;
}

QuadratureSet element_rule(std::span<const Point, 4> elem, std::span<const Polygon> pieces, bool tip,
                           const QuadratureOptions& options, int id) {
  if (pieces.size() < 2) return standard_rule(elem, id);
  if (options.scheme == Scheme::subcell) return subcell_rule(elem, pieces, id);
  if (options.scheme == Scheme::standard) return standard_rule(elem, id);
  const int target = tip ? options.tip_points : 13 * subcell_triangle_count(pieces, element_area_tol(elem));
  return sccm_rule(elem, pieces, target, options.rule, options.sc, id);
}

void write_quadrature_csv(const std::string& path, std::span<const QuadratureSet> sets) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << "elem,x,y,w,scheme\n" << std::setprecision(17);
  for (const auto& s : sets)
    for (const auto& p : s.points)
      out << s.element << ',' << p.x.x() << ',' << p.x.y() << ',' << p.w << ',' << to_string(s.scheme) << '\n';
}

}  // namespace xfrac
