#include "xfrac/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "xfrac/error.hpp"

namespace xfrac {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

}  // namespace

double griffith_sif(double sigma, double a) { return sigma * std::sqrt(kPi * a); }

double edge_crack_factor(double x) {
  if (!(x >= 0.0) || x > 0.6) {
    std::ostringstream msg;
    msg << "edge crack correction is fitted for a/H <= 0.6, got " << x;
    throw Error(ErrorCode::out_of_validity, msg.str());
  }
  return 1.12 - 0.231 * x + 10.55 * x * x - 21.72 * x * x * x + 30.39 * x * x * x * x;
}

double center_crack_sif(double sigma, double a, double w) {
  if (!(a > 0.0) || !(a < w)) throw Error(ErrorCode::invalid_argument, "crack must be shorter than the strip");
  return sigma * std::sqrt(kPi * a / std::cos(kPi * a / (2.0 * w)));
}

std::pair<double, double> inclined_crack_sifs(double sigma, double a, double beta) {
  const double k = griffith_sif(sigma, a);
  const double c = std::cos(beta), s = std::sin(beta);
  return {k * c * c, k * s * c};
}

InclinedCrackField::InclinedCrackField(double sigma, double a, double beta, Point center, Material material)
    : sigma_(sigma), a_(a), beta_(beta), center_(std::move(center)), m_(material) {}

namespace {

struct Potentials {
  cd Z, Zbar, dZ;
};

// Z = z / sqrt(z^2 - a^2) with the cut on [-a, a].
Potentials potentials(cd z, double a) {
  const cd s = std::sqrt(z - a) * std::sqrt(z + a);
  if (std::abs(s) == 0.0) throw Error(ErrorCode::domain_error, "field evaluated at a crack tip");
  return {z / s, s, -a * a / (s * s * s)};
}

}  // namespace

Point InclinedCrackField::displacement(const Point& x) const {
  const double c = std::cos(beta_), s = std::sin(beta_);
  const Point d = x - center_;
  const double xl = c * d.x() + s * d.y(), yl = -s * d.x() + c * d.y();
  const auto p = potentials(cd(xl, yl), a_);

  const double sn = sigma_ * c * c, tau = sigma_ * s * c, extra = sigma_ * s * s - sn;
  const double mu = m_.E / (2.0 * (1.0 + m_.nu)), k = m_.kappa();

  double ux = sn * (0.5 * (k - 1.0) * p.Zbar.real() - yl * p.Z.imag()) +
              tau * (0.5 * (k + 1.0) * p.Zbar.imag() + yl * p.Z.real());
  double uy = sn * (0.5 * (k + 1.0) * p.Zbar.imag() - yl * p.Z.real()) +
              tau * (-0.5 * (k - 1.0) * p.Zbar.real() - yl * p.Z.imag());
  ux /= 2.0 * mu;
  uy /= 2.0 * mu;

  // uniform stress along the crack
  double exx, eyy;
  if (m_.regime == Regime::plane_strain) {
    exx = (1.0 - m_.nu * m_.nu) / m_.E * extra;
    eyy = -m_.nu * (1.0 + m_.nu) / m_.E * extra;
  } else {
    exx = extra / m_.E;
    eyy = -m_.nu * extra / m_.E;
  }
  ux += exx * xl;
  uy += eyy * yl;
  return {c * ux - s * uy, s * ux + c * uy};
}

Eigen::Vector3d InclinedCrackField::stress(const Point& x) const {
  const double c = std::cos(beta_), s = std::sin(beta_);
  const Point d = x - center_;
  const double xl = c * d.x() + s * d.y(), yl = -s * d.x() + c * d.y();
  const auto p = potentials(cd(xl, yl), a_);
  const double sn = sigma_ * c * c, tau = sigma_ * s * c, extra = sigma_ * s * s - sn;

  const double sxx = sn * (p.Z.real() - yl * p.dZ.imag()) + tau * (2.0 * p.Z.imag() + yl * p.dZ.real()) + extra;
  const double syy = sn * (p.Z.real() + yl * p.dZ.imag()) - tau * yl * p.dZ.real();
  const double sxy = -sn * yl * p.dZ.real() + tau * (p.Z.real() - yl * p.dZ.imag());

  Eigen::Matrix2d local;
  local << sxx, sxy, sxy, syy;
  Eigen::Matrix2d R;
  R << c, -s, s, c;
  const Eigen::Matrix2d g = R * local * R.transpose();
  return {g(0, 0), g(1, 1), g(0, 1)};
}

double bimaterial_alpha(double e1, double e2, double b) { return e2 / (e2 * (b + 1.0) - e1 * (b - 1.0)); }

double bimaterial_displacement(double y, double e1, double e2, double b) {
  const double alpha = bimaterial_alpha(e1, e2, b);
  if (y <= b) return (y + 1.0) * alpha;
  return 1.0 + e1 / e2 * (y - 1.0) * alpha;
}

}  // namespace xfrac
