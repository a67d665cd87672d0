#pragma once

// Convergence tables, CSV output and SVG line drawings of meshes and cracks.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "xfrac/geometry.hpp"
#include "xfrac/mesh.hpp"

namespace xfrac {

struct ConvergenceRow {
  double h = 0.0;
  double metric = 0.0;
  double reference = 0.0;
  double rel_err = 0.0;
  // log-log slope against the previous row; NaN on the first row
  double rate = std::numeric_limits<double>::quiet_NaN();
};

// |metric - reference| / |reference|
ConvergenceRow make_row(double h, double metric, double reference);

// Fills the consecutive-row rates.
void fill_rates(std::vector<ConvergenceRow>& rows);

// Least-squares slope of log(rel_err) against log(h). Throws no_rate with
// fewer than two rows or a non-positive error or size.
double convergence_rate(std::span<const ConvergenceRow> rows);

// h,metric,reference,rel_err,rate
void write_convergence_csv(const std::string& path, std::span<const ConvergenceRow> rows);

struct SvgPolyline {
  std::vector<Point> points;
  std::string color = "#c0392b";
  std::string label;
  bool mark_ends = true;  // draw tip markers at the last vertex
};

// Domain outline, optional grid lines and crack polylines, y axis up.
void write_svg(const std::string& path, const Bounds& bounds, const Mesh* mesh,
               std::span<const SvgPolyline> lines);

}  // namespace xfrac
