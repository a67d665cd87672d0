#include "xfrac/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "xfrac/error.hpp"

namespace xfrac {

ConvergenceRow make_row(double h, double metric, double reference) {
  ConvergenceRow r;
  r.h = h;
  r.metric = metric;
  r.reference = reference;
  r.rel_err = std::abs(metric - reference) / std::abs(reference);
  return r;
}

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k == 0) {
      rows[k].rate = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto& a = rows[k - 1];
    const auto& b = rows[k];
    rows[k].rate = std::log(b.rel_err / a.rel_err) / std::log(b.h / a.h);
  }
}

double convergence_rate(std::span<const ConvergenceRow> rows) {
  if (rows.size() < 2) throw Error(ErrorCode::no_rate, "need at least two rows for a rate");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& r : rows) {
    if (!(r.h > 0.0) || !(r.rel_err > 0.0)) throw Error(ErrorCode::no_rate, "rate needs positive sizes and errors");
    const double x = std::log(r.h), y = std::log(r.rel_err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw Error(ErrorCode::no_rate, "all rows share one element size");
  return (n * sxy - sx * sy) / den;
}

void write_convergence_csv(const std::string& path, std::span<const ConvergenceRow> rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << "h,metric,reference,rel_err,rate\n" << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.h << ',' << r.metric << ',' << r.reference << ',' << r.rel_err << ',';
    if (std::isfinite(r.rate)) out << r.rate;
    out << '\n';
  }
}

void write_svg(const std::string& path, const Bounds& b, const Mesh* mesh, std::span<const SvgPolyline> lines) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  const double scale = 800.0 / std::max(b.width(), b.height());
  const double pad = 20.0;
  const double W = b.width() * scale + 2 * pad, H = b.height() * scale + 2 * pad;
  auto X = [&](double x) { return pad + (x - b.xmin) * scale; };
  auto Y = [&](double y) { return pad + (b.ymax - y) * scale; };

  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << ' ' << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (mesh) {
    out << "<g stroke=\"#d0d0d0\" stroke-width=\"0.5\" fill=\"none\">\n";
    for (std::size_t e = 0; e < mesh->element_count(); ++e) {
      const auto p = mesh->element_points(e);
      out << "<polygon points=\"";
      for (const auto& q : p) out << X(q.x()) << ',' << Y(q.y()) << ' ';
      out << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "<rect class=\"outline\" x=\"" << X(b.xmin) << "\" y=\"" << Y(b.ymax) << "\" width=\"" << b.width() * scale
      << "\" height=\"" << b.height() * scale << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  double legend_y = pad + 14.0;
  for (const auto& line : lines) {
    if (line.points.empty()) continue;
    out << "<polyline class=\"crack\" fill=\"none\" stroke=\"" << line.color << "\" stroke-width=\"2\" points=\"";
    for (const auto& q : line.points) out << X(q.x()) << ',' << Y(q.y()) << ' ';
    out << "\"/>\n";
    if (line.mark_ends) {
      const Point& t = line.points.back();
      out << "<circle class=\"tip\" cx=\"" << X(t.x()) << "\" cy=\"" << Y(t.y()) << "\" r=\"4\" fill=\"" << line.color
          << "\"/>\n";
    }
    if (!line.label.empty()) {
      out << "<text x=\"" << W - pad - 150 << "\" y=\"" << legend_y << "\" font-size=\"12\" fill=\"" << line.color
          << "\">" << line.label << "</text>\n";
      legend_y += 16.0;
    }
  }
  out << "</svg>\n";
}

}  // namespace xfrac
