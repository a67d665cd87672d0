#pragma once

// Small helpers shared by the unit suites: random polygons, polynomial
// integrands and a Green's-theorem reference for them.

#include <cmath>
#include <numbers>
#include <vector>

#include "xfrac/gauss.hpp"
#include "xfrac/geometry.hpp"
#include "xfrac/rng.hpp"

namespace xfrac::testing {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Star-shaped polygon around the origin with sorted random angles: simple and
// CCW by construction, convex or not depending on the radii.
inline Polygon random_star(SplitMix64& rng, int n, double rmin = 0.4) {
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.2 + 0.6 * rng.uniform()) / n;
    const double r = rmin + (1.0 - rmin) * rng.uniform();
    v.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  return Polygon(std::move(v));
}

inline Polygon random_convex_quad(SplitMix64& rng) {
  std::vector<Point> v;
  for (int k = 0; k < 4; ++k) {
    const double t = std::numbers::pi * (0.5 * k + 0.15 * (2.0 * rng.uniform() - 1.0));
    v.emplace_back(std::cos(t), std::sin(t));
  }
  return Polygon(std::move(v));
}

// sum c[p][q] x^p y^q, p + q <= 4
struct Poly {
  double c[5][5] = {};

  static Poly random(SplitMix64& rng, int degree = 4) {
    Poly f;
    for (int p = 0; p <= degree; ++p)
      for (int q = 0; p + q <= degree; ++q) f.c[p][q] = 2.0 * rng.uniform() - 1.0;
    return f;
  }
  double operator()(const Point& x) const {
    double s = 0.0;
    for (int p = 0; p < 5; ++p)
      for (int q = 0; p + q < 5; ++q)
        if (c[p][q] != 0.0) s += c[p][q] * std::pow(x.x(), p) * std::pow(x.y(), q);
    return s;
  }
};

// Area integral as the boundary integral of F dy with dF/dx = f; the edge
// integrands are polynomials of degree <= 5, so 4 Gauss points are exact.
inline double green_integral(const Polygon& poly, const Poly& f) {
  const auto g = gauss_legendre(4);
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = poly[k], b = poly[(k + 1) % n];
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const Point x = a + 0.5 * (1.0 + g.nodes[i]) * (b - a);
      double F = 0.0;
      for (int p = 0; p < 5; ++p)
        for (int q = 0; p + q < 5; ++q) F += f.c[p][q] * std::pow(x.x(), p + 1) / (p + 1) * std::pow(x.y(), q);
      s += 0.5 * g.weights[i] * F * (b.y() - a.y());
    }
  }
  return s;
}

}  // namespace xfrac::testing
