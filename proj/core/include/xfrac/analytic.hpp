#pragma once

// Closed-form reference solutions for the benchmark problems.

#include <complex>

#include <Eigen/Core>

#include "xfrac/fem.hpp"

namespace xfrac {

// sigma sqrt(pi a)
double griffith_sif(double sigma, double a);

// Finite-width edge crack correction, valid for a/H <= 0.6 (out_of_validity
// otherwise).
double edge_crack_factor(double a_over_h);

// Center crack in a strip of half-width w: sigma sqrt(pi a sec(pi a / 2w)).
double center_crack_sif(double sigma, double a, double w);

// K_I = sigma sqrt(pi a) cos^2 beta, K_II = sigma sqrt(pi a) sin beta cos beta.
std::pair<double, double> inclined_crack_sifs(double sigma, double a, double beta);

// Straight crack of half-length a centred at `center`, inclined at beta to
// the x axis, in an infinite plate under uniaxial tension sigma along y.
// Westergaard complex potentials for the normal and shear parts plus a
// uniform stress parallel to the crack.
class InclinedCrackField {
 public:
  InclinedCrackField(double sigma, double a, double beta, Point center, Material material);

  Point displacement(const Point& x) const;
  // sxx, syy, sxy in global axes.
  Eigen::Vector3d stress(const Point& x) const;

 private:
  double sigma_, a_, beta_;
  Point center_;
  Material m_;
};

// One-dimensional bar along y on (-1, 1) with an interface at y = b:
// alpha = E2 / (E2 (b + 1) - E1 (b - 1)).
double bimaterial_alpha(double e1, double e2, double b);
double bimaterial_displacement(double y, double e1, double e2, double b);

}  // namespace xfrac
