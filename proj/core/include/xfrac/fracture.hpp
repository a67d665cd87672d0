#pragma once

// Near-tip asymptotic fields, stress intensity factors from the domain
// interaction integral, the maximum hoop stress kink angle and quasi-static
// growth.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "xfrac/fem.hpp"

namespace xfrac {

struct SifPair {
  double K1 = 0.0;
  double K2 = 0.0;
  double radius = 0.0;  // extraction radius used
};

// Asymptotic fields in the tip frame (x along the crack tangent), with the
// K / sqrt(2 pi r) stress normalization. Throws domain_error at r = 0.
Eigen::Vector3d westergaard_stress(const SifPair& K, double r, double theta);  // sxx, syy, sxy
Point westergaard_displacement(const SifPair& K, double r, double theta, const Material& m);
// d u_i / d x_j in the tip frame.
Eigen::Matrix2d westergaard_gradient(const SifPair& K, double r, double theta, const Material& m);

// Same fields expressed in global coordinates around a tip frame.
Point near_tip_displacement(const SifPair& K, const TipFrame& frame, const Point& x, const Material& m);

// Domain form of the interaction integral with a plateau weight q (1 within
// r_d/2 of the tip, 0 beyond r_d, nodal values interpolated bilinearly).
// The radius is halved once, with a warning, if the disk of radius r_d
// leaves the domain or reaches another crack; a second failure throws.
SifPair interaction_integral(const Solution& s, const TipFrame& tip, double r_d);

// Maximum hoop stress direction relative to the crack tangent (radians).
double hoop_angle(const SifPair& K);

// Appends a segment of length da at angle (tip tangent + theta_c). Throws
// growth_terminated if the new tip leaves `bounds`.
CrackPath grow_crack(const CrackPath& crack, int end, double theta_c, double da, const Bounds& bounds);

struct GrowthStep {
  CrackPath crack;
  SifPair K;
  double theta_c = 0.0;
};

struct GrowthOptions {
  int steps = 8;
  double da = 0.15;
  double rd_factor = 3.0;  // extraction radius in element sizes
  int crack = 0;
  int end = 1;
};

using BoundaryConditions = std::function<void(const Model&, const Discretization&, LinearSystem&)>;

// Repeats discretize -> assemble -> constrain -> solve -> SIFs -> kink ->
// grow on a fixed mesh. Returns steps + 1 snapshots; the last one carries the
// SIFs of the final crack.
std::vector<GrowthStep> quasi_static_run(Model model, const QuadratureOptions& quad, const BoundaryConditions& bcs,
                                         const GrowthOptions& options);

// step,tip_x,tip_y,K1,K2,theta_c
void write_growth_csv(const std::string& path, const std::vector<GrowthStep>& steps, int end = 1);

}  // namespace xfrac
