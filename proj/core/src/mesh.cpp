#include "xfrac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/LU>

#include "xfrac/error.hpp"
#include "xfrac/rng.hpp"

namespace xfrac {

namespace {

constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)

}  // namespace

ElementPoints Mesh::element_points(std::size_t e) const {
  const auto& c = elements[e];
  return {nodes[c[0]], nodes[c[1]], nodes[c[2]], nodes[c[3]]};
}

double Mesh::element_area(std::size_t e) const {
  const auto p = element_points(e);
  return shoelace_area(p);
}

bool Mesh::on_boundary(std::size_t node, double tol) const {
  const Point& p = nodes[node];
  const double t = tol * std::max(bounds.width(), bounds.height());
  return std::abs(p.x() - bounds.xmin) <= t || std::abs(p.x() - bounds.xmax) <= t ||
         std::abs(p.y() - bounds.ymin) <= t || std::abs(p.y() - bounds.ymax) <= t;
}

std::vector<std::vector<int>> Mesh::node_elements() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (std::size_t e = 0; e < elements.size(); ++e)
    for (int n : elements[e]) out[n].push_back(static_cast<int>(e));
  return out;
}

namespace {

bool inside_quad(const ElementPoints& p, const Point& x, double tol) {
  for (int k = 0; k < 4; ++k) {
    const Point e = p[(k + 1) % 4] - p[k];
    if (cross(e, x - p[k]) / e.norm() < -tol) return false;
  }
  return true;
}

}  // namespace

int Mesh::locate(const Point& x) const {
  const double tol = 1e-10 * h();
  if (nx > 0 && ny > 0) {
    // Perturbation moves nodes by less than half a cell, so the element is
    // within one cell of the regular-grid guess.
    const int gi = static_cast<int>(std::floor((x.x() - bounds.xmin) / bounds.width() * nx));
    const int gj = static_cast<int>(std::floor((x.y() - bounds.ymin) / bounds.height() * ny));
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int i = gi + di, j = gj + dj;
        if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
        const int e = i + j * nx;
        if (inside_quad(element_points(e), x, tol)) return e;
      }
    }
  }
  for (std::size_t e = 0; e < elements.size(); ++e)
    if (inside_quad(element_points(e), x, tol)) return static_cast<int>(e);
  return -1;
}

double Mesh::h() const {
  if (nx > 0 && ny > 0) return std::max(bounds.width() / nx, bounds.height() / ny);
  return std::sqrt(bounds.width() * bounds.height() / static_cast<double>(elements.size()));
}

Mesh structured_mesh(int nx, int ny, const Bounds& bounds) {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::invalid_argument, "structured mesh needs nx, ny >= 1");
  if (bounds.width() <= 0.0 || bounds.height() <= 0.0)
    throw Error(ErrorCode::invalid_argument, "structured mesh needs a non-empty rectangle");
  Mesh m;
  m.bounds = bounds;
  m.nx = nx;
  m.ny = ny;
  const double dx = bounds.width() / nx;
  const double dy = bounds.height() / ny;
  m.nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Grid multiples, not running sums; the last line lands on the bound.
      const double x = i == nx ? bounds.xmax : bounds.xmin + i * dx;
      const double y = j == ny ? bounds.ymax : bounds.ymin + j * dy;
      m.nodes.emplace_back(x, y);
    }
  }
  m.elements.reserve(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n0 = i + j * (nx + 1);
      m.elements.push_back({n0, n0 + 1, n0 + nx + 2, n0 + nx + 1});
    }
  }
  return m;
}

Mesh perturb_mesh(const Mesh& mesh, double alpha_ir, std::uint64_t seed) {
  if (!(alpha_ir >= 0.0 && alpha_ir < 0.5))
    throw Error(ErrorCode::invalid_argument, "irregularity factor must lie in [0, 0.5)");
  if (mesh.nx <= 0 || mesh.ny <= 0)
    throw Error(ErrorCode::invalid_argument, "mesh perturbation needs a structured mesh");
  Mesh out = mesh;
  if (alpha_ir == 0.0) return out;

  const double dx = mesh.bounds.width() / mesh.nx;
  const double dy = mesh.bounds.height() / mesh.ny;
  const auto support = mesh.node_elements();
  SplitMix64 rng(seed);
  for (std::size_t n = 0; n < out.nodes.size(); ++n) {
    if (mesh.on_boundary(n)) continue;
    const Point original = out.nodes[n];
    bool ok = false;
    for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
      const double rx = rng.uniform();
      const double ry = rng.uniform();
      out.nodes[n] = original + Point((2.0 * rx - 1.0) * alpha_ir * dx, (2.0 * ry - 1.0) * alpha_ir * dy);
      // corner Jacobians, not Gauss-point ones: clipping and point location
      // need convex elements
      ok = std::all_of(support[n].begin(), support[n].end(),
                       [&](int e) { return min_corner_jacobian(out.element_points(e)) > 0.0; });
    }
    if (!ok) throw Error(ErrorCode::degenerate_geometry, "mesh perturbation inverted an element");
  }
  return out;
}

std::array<double, 4> shape_functions(const Point& xi) {
  const double s = xi.x(), t = xi.y();
  return {0.25 * (1 - s) * (1 - t), 0.25 * (1 + s) * (1 - t), 0.25 * (1 + s) * (1 + t),
          0.25 * (1 - s) * (1 + t)};
}

Eigen::Matrix<double, 4, 2> shape_gradients_parent(const Point& xi) {
  const double s = xi.x(), t = xi.y();
  Eigen::Matrix<double, 4, 2> d;
  d << -0.25 * (1 - t), -0.25 * (1 - s),
        0.25 * (1 - t), -0.25 * (1 + s),
        0.25 * (1 + t),  0.25 * (1 + s),
       -0.25 * (1 + t),  0.25 * (1 - s);
  return d;
}

Point parent_to_physical(std::span<const Point, 4> elem, const Point& xi) {
  const auto n = shape_functions(xi);
  Point x = Point::Zero();
  for (int i = 0; i < 4; ++i) x += n[i] * elem[i];
  return x;
}

Eigen::Matrix2d jacobian(std::span<const Point, 4> elem, const Point& xi) {
  const auto d = shape_gradients_parent(xi);
  Eigen::Matrix2d j = Eigen::Matrix2d::Zero();
  // J(a, b) = d x_b / d xi_a
  for (int i = 0; i < 4; ++i) {
    j(0, 0) += d(i, 0) * elem[i].x();
    j(0, 1) += d(i, 0) * elem[i].y();
    j(1, 0) += d(i, 1) * elem[i].x();
    j(1, 1) += d(i, 1) * elem[i].y();
  }
  return j;
}

Point physical_to_parent(std::span<const Point, 4> elem, const Point& x) {
  const ElementPoints p{elem[0], elem[1], elem[2], elem[3]};
  const double diag = std::max((p[2] - p[0]).norm(), (p[3] - p[1]).norm());
  if (!inside_quad(p, x, 1e-8 * diag))
    throw Error(ErrorCode::out_of_element, "point lies outside the element");
  Point xi = Point::Zero();
  double res = 0.0;
  for (int it = 0; it < 20; ++it) {
    const Point r = parent_to_physical(elem, xi) - x;
    const Eigen::Matrix2d j = jacobian(elem, xi);
    // dx/dxi = J^T
    const Point step = j.transpose().partialPivLu().solve(r);
    xi -= step;
    res = step.lpNorm<Eigen::Infinity>();
    if (res < 1e-12) {
      return xi.cwiseMax(-1.0).cwiseMin(1.0);
    }
  }
  if (res < 1e-9) return xi.cwiseMax(-1.0).cwiseMin(1.0);  // stalled at roundoff
  std::ostringstream msg;
  msg << "bilinear inversion did not converge (last step " << res << ")";
  throw Error(ErrorCode::non_convergence, msg.str());
}

double min_corner_jacobian(std::span<const Point, 4> elem) {
  double m = std::numeric_limits<double>::infinity();
  for (double s : {-1.0, 1.0})
    for (double t : {-1.0, 1.0}) m = std::min(m, jacobian(elem, Point(s, t)).determinant());
  return m;
}

double min_gauss_jacobian(std::span<const Point, 4> elem) {
  double m = std::numeric_limits<double>::infinity();
  for (double s : {-kGauss, kGauss})
    for (double t : {-kGauss, kGauss}) m = std::min(m, jacobian(elem, Point(s, t)).determinant());
  return m;
}

void write_mesh_csv(const Mesh& mesh, const std::string& nodes_path, const std::string& elements_path) {
  std::ofstream nf(nodes_path);
  std::ofstream ef(elements_path);
  if (!nf || !ef) throw Error(ErrorCode::io_error, "cannot open mesh CSV output");
  nf << "id,x,y\n" << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    nf << i << ',' << mesh.nodes[i].x() << ',' << mesh.nodes[i].y() << '\n';
  ef << "id,n1,n2,n3,n4\n";
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& c = mesh.elements[e];
    ef << e << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << '\n';
  }
}

}  // namespace xfrac
