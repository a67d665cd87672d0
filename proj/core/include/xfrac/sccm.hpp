#pragma once

// Schwarz-Christoffel maps from the unit disk onto simple polygons and the
// disk cubature rules that turn them into polygon quadrature.
//
// The map is f(z) = A + C * int_0^z prod_k (1 - s/z_k)^beta_k ds with
// prevertices z_k = exp(i theta_k) on the unit circle and beta_k =
// alpha_k/pi - 1 for interior angle alpha_k. Path integrals are evaluated by
// compound Gauss-Jacobi quadrature: singular end points are absorbed into
// the Jacobi weight and intervals are bisected until no other prevertex is
// closer than half the interval length.

#include <complex>
#include <string>
#include <vector>

#include "xfrac/geometry.hpp"

namespace xfrac {

using Complex = std::complex<double>;

struct ScOptions {
  double tol = 1e-10;        // side-length residual, infinity norm
  int max_iterations = 100;  // damped Newton
  int nodes_per_interval = 12;
  double crowding_gap = 1e-10;  // minimum prevertex spacing (radians)
};

class ConformalMap {
 public:
  const std::vector<Complex>& vertices() const { return vertices_; }
  const std::vector<double>& prevertex_args() const { return args_; }
  const std::vector<double>& betas() const { return betas_; }
  const std::vector<Complex>& prevertices() const { return prevertices_; }
  Complex scale() const { return scale_; }
  Complex offset() const { return offset_; }
  // Side-length residual of the solved parameter problem.
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }
  std::size_t size() const { return vertices_.size(); }
  int nodes_per_interval() const { return nodes_; }

  // Unscaled path integral of prod (1 - s/z_k)^beta_k along the chord from a
  // to b. `sing_a`/`sing_b` name the prevertex sitting at that end, or -1.
  Complex integrate(Complex a, Complex b, int sing_a, int sing_b) const;

  // Replaces the prevertex arguments (solver iterations).
  void set_prevertices(std::vector<double> args);

 private:
  friend ConformalMap solve_parameter_problem(const Polygon&, const ScOptions&);
  friend ConformalMap make_map(std::vector<Complex>, std::vector<double>, Complex, Complex, int);

  Complex integrate_simple(Complex a, Complex b, int sing_a, int sing_b) const;

  std::vector<Complex> vertices_;
  std::vector<double> args_;
  std::vector<double> betas_;
  std::vector<Complex> prevertices_;
  Complex scale_{1.0, 0.0};
  Complex offset_{0.0, 0.0};
  double residual_ = 0.0;
  int iterations_ = 0;
  int nodes_ = 12;
  // Gauss-Jacobi tables: [k] has weight (1 + t)^beta_k, the Legendre rule is shared.
  std::vector<std::vector<double>> jac_nodes_;
  std::vector<std::vector<double>> jac_weights_;
  std::vector<double> leg_nodes_;
  std::vector<double> leg_weights_;
};

// Builds a map from explicit parameters (no solve). Used by tests and by
// fixtures that load stored maps.
ConformalMap make_map(std::vector<Complex> vertices, std::vector<double> prevertex_args, Complex scale,
                      Complex offset, int nodes_per_interval = 12);

// Interior angles / pi minus one, in vertex order (CCW polygon).
std::vector<double> turning_exponents(const Polygon& poly);

// Solves for prevertices with z_n = 1 and f(0) at the polygon's conformal
// center (its centroid when that lies well inside, otherwise the incenter of
// the fattest ear-clipping triangle).
ConformalMap solve_parameter_problem(const Polygon& poly, const ScOptions& opts = {});

Complex map_eval(const ConformalMap& map, Complex z);
// Throws domain_error for |z| >= 1.
Complex map_derivative(const ConformalMap& map, Complex z);

// Largest distance between a polygon vertex and the image of its prevertex.
double vertex_reproduction_error(const ConformalMap& map);

// Interior point used as f(0).
Point conformal_center(const Polygon& poly);

struct DiskRule {
  std::vector<Complex> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

// Polar grid of n_r x n_t cells, point at each cell center, weight = exact cell area.
DiskRule midpoint_disk_rule(int n_r, int n_t);
// Gauss-Legendre in u = r^2 times the equispaced trapezoid rule in angle.
DiskRule chebyshev_disk_rule(int n_r, int n_t);

struct WeightedPoint {
  Point x;
  double w;
};

// Points f(zeta_j) with weights omega_j |f'(zeta_j)|^2.
std::vector<WeightedPoint> polygon_quadrature(const Polygon& poly, const DiskRule& rule,
                                              const ScOptions& opts = {});
std::vector<WeightedPoint> polygon_quadrature(const ConformalMap& map, const DiskRule& rule);

// JSON object with vertices, prevertex args, C, A, residual.
std::string map_to_json(const ConformalMap& map);

}  // namespace xfrac
