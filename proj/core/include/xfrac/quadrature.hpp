#pragma once

// Element quadrature: 2x2 Gauss for uncut elements, triangular subcells or
// conformal (SC) maps for elements cut by a discontinuity. Every point carries
// its parent coordinates and a weight measured in physical area.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xfrac/geometry.hpp"
#include "xfrac/sccm.hpp"

namespace xfrac {

enum class Scheme { standard, subcell, sccm };
enum class DiskRuleKind { midpoint, chebyshev };

std::string_view to_string(Scheme s);
std::string_view to_string(DiskRuleKind r);
Scheme parse_scheme(std::string_view s);
DiskRuleKind parse_disk_rule(std::string_view s);

struct QuadPoint {
  Point xi;  // parent coordinates
  Point x;   // physical point
  double w;  // physical area weight
};

struct QuadratureSet {
  int element = -1;
  Scheme scheme = Scheme::standard;
  std::vector<QuadPoint> points;

  double weight_sum() const;
};

struct QuadratureOptions {
  Scheme scheme = Scheme::sccm;  // applies to cut elements only
  DiskRuleKind rule = DiskRuleKind::midpoint;
  int tip_points = 78;
  ScOptions sc;
};

struct RuleSize {
  int n_r = 1;
  int n_t = 1;
  int count() const { return n_r * n_t; }
};

QuadratureSet standard_rule(std::span<const Point, 4> elem, int id = -1);

// 13-point triangle rule on a fan (or ear-clip) triangulation of each piece.
QuadratureSet subcell_rule(std::span<const Point, 4> elem, std::span<const Polygon> pieces, int id = -1);

// Number of triangles subcell_rule uses for these pieces.
int subcell_triangle_count(std::span<const Polygon> pieces, double area_tol);

// Disk-rule sizes per piece so the total is close to `target`, shared out in
// proportion to piece area.
std::vector<RuleSize> tip_point_budget(int target, std::span<const double> areas, DiskRuleKind rule);

DiskRule make_disk_rule(DiskRuleKind rule, const RuleSize& size);

// SC quadrature over each piece. If any piece's map cannot be solved the
// element falls back to subcell_rule and a warning is emitted.
QuadratureSet sccm_rule(std::span<const Point, 4> elem, std::span<const Polygon> pieces, int target_points,
                        DiskRuleKind rule, const ScOptions& sc, int id = -1);

// Dispatch for one element: standard rule when `pieces` is empty, otherwise
// the configured cut-element scheme. Split elements get 13 points per subcell
// triangle; tip elements get options.tip_points.
QuadratureSet element_rule(std::span<const Point, 4> elem, std::span<const Polygon> pieces, bool tip,
                           const QuadratureOptions& options, int id = -1);

// elem,x,y,w,scheme
void write_quadrature_csv(const std::string& path, std::span<const QuadratureSet> sets);

}  // namespace xfrac
