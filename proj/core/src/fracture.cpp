#include "xfrac/fracture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "xfrac/error.hpp"

namespace xfrac {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2d rotation(double angle) {
  // global -> local components
  Eigen::Matrix2d Q;
  Q << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  return Q;
}

Eigen::Matrix2d tensor(const Eigen::Vector3d& v) {
  Eigen::Matrix2d t;
  t << v(0), v(2), v(2), v(1);
  return t;
}

}  // namespace

Eigen::Vector3d westergaard_stress(const SifPair& K, double r, double theta) {
  if (!(r > 0.0)) throw Error(ErrorCode::domain_error, "asymptotic field evaluated at the tip");
  const double f = 1.0 / std::sqrt(2.0 * kPi * r);
  const double h = 0.5 * theta;
  const double sh = std::sin(h), ch = std::cos(h), s3 = std::sin(3.0 * h), c3 = std::cos(3.0 * h);
  const Eigen::Vector3d mode1(ch * (1.0 - sh * s3), ch * (1.0 + sh * s3), sh * ch * c3);
  const Eigen::Vector3d mode2(-sh * (2.0 + ch * c3), sh * ch * c3, ch * (1.0 - sh * s3));
  return f * (K.K1 * mode1 + K.K2 * mode2);
}

Point westergaard_displacement(const SifPair& K, double r, double theta, const Material& m) {
  const double k = m.kappa();
  const double c = (1.0 + m.nu) / m.E * std::sqrt(r / (2.0 * kPi));
  const double h = 0.5 * theta;
  const double sh = std::sin(h), ch = std::cos(h);
  const double ux = K.K1 * ch * (k - 1.0 + 2.0 * sh * sh) + K.K2 * sh * (k + 1.0 + 2.0 * ch * ch);
  const double uy = K.K1 * sh * (k + 1.0 - 2.0 * ch * ch) - K.K2 * ch * (k - 1.0 - 2.0 * sh * sh);
  return c * Point(ux, uy);
}

Eigen::Matrix2d westergaard_gradient(const SifPair& K, double r, double theta, const Material& m) {
  if (!(r > 0.0)) throw Error(ErrorCode::domain_error, "asymptotic field evaluated at the tip");
  const double k = m.kappa();
  const double c = (1.0 + m.nu) / (m.E * std::sqrt(2.0 * kPi));
  const double h = 0.5 * theta;
  const double sh = std::sin(h), ch = std::cos(h);
  // angular parts g(theta) and dg/dtheta
  const double gx = K.K1 * ch * (k - 1.0 + 2.0 * sh * sh) + K.K2 * sh * (k + 1.0 + 2.0 * ch * ch);
  const double gy = K.K1 * sh * (k + 1.0 - 2.0 * ch * ch) - K.K2 * ch * (k - 1.0 - 2.0 * sh * sh);
  const double dgx = 0.5 * (K.K1 * (-sh * (k - 1.0 + 2.0 * sh * sh) + 4.0 * sh * ch * ch) +
                            K.K2 * (ch * (k + 1.0 + 2.0 * ch * ch) - 4.0 * sh * sh * ch));
  const double dgy = 0.5 * (K.K1 * (ch * (k + 1.0 - 2.0 * ch * ch) + 4.0 * sh * sh * ch) +
                            K.K2 * (sh * (k - 1.0 - 2.0 * sh * sh) + 4.0 * sh * ch * ch));
  const double sr = std::sqrt(r);
  const double ct = std::cos(theta), st = std::sin(theta);
  // u = c sqrt(r) g: du/dr = c g / (2 sqrt r), (1/r) du/dtheta = c g' / sqrt r
  const double drx = c * gx / (2.0 * sr), dry = c * gy / (2.0 * sr);
  const double dtx = c * dgx / sr, dty = c * dgy / sr;
  Eigen::Matrix2d G;
  G << ct * drx - st * dtx, st * drx + ct * dtx,
       ct * dry - st * dty, st * dry + ct * dty;
  return G;
}

Point near_tip_displacement(const SifPair& K, const TipFrame& frame, const Point& x, const Material& m) {
  const auto [r, theta] = frame.polar(x);
  const Point local = westergaard_displacement(K, r, theta, m);
  return rotation(frame.angle).transpose() * local;
}

namespace {

double clearance(const Solution& s, const TipFrame& tip) {
  const auto& b = s.model().mesh.bounds;
  double d = std::min({tip.tip.x() - b.xmin, b.xmax - tip.tip.x(), tip.tip.y() - b.ymin, b.ymax - tip.tip.y()});
  const auto& cracks = s.model().disc.cracks;
  for (const auto& c : cracks) {
    bool own = false;
    for (int end = 0; end < 2; ++end) own = own || (c.end_point(end) - tip.tip).norm() < 1e-12;
    if (!own) d = std::min(d, distance_to_path(tip.tip, c));
  }
  return d;
}

}  // namespace

SifPair interaction_integral(const Solution& s, const TipFrame& tip, double r_d) {
  if (!(r_d > 0.0)) throw Error(ErrorCode::invalid_argument, "extraction radius must be positive");
  const double room = clearance(s, tip);
  if (room < r_d) {
    std::ostringstream msg;
    msg << "J-domain radius " << r_d << " reaches a boundary or another crack (clearance " << room << ")";
    if (room < 0.5 * r_d) throw Error(ErrorCode::invalid_argument, msg.str());
    warn(msg.str() + "; halving it");
    r_d *= 0.5;
  }

  const Model& model = s.model();
  const Discretization& d = s.discretization();
  const Mesh& mesh = model.mesh;
  const Material& mat = model.material.at(tip.tip);
  const Eigen::Matrix2d Q = rotation(tip.angle);

  std::vector<double> q(mesh.node_count());
  for (std::size_t n = 0; n < mesh.node_count(); ++n) {
    const double r = (mesh.nodes[n] - tip.tip).norm();
    q[n] = std::clamp((r_d - r) / (0.5 * r_d), 0.0, 1.0);
  }

  double I1 = 0.0, I2 = 0.0;
  const SifPair unit1{1.0, 0.0, 0.0}, unit2{0.0, 1.0, 0.0};
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto& en = mesh.elements[e];
    const double qmin = std::min({q[en[0]], q[en[1]], q[en[2]], q[en[3]]});
    const double qmax = std::max({q[en[0]], q[en[1]], q[en[2]], q[en[3]]});
    if (qmax - qmin <= 0.0) continue;
    const ElementPoints pts = mesh.element_points(e);
    for (const auto& qp : d.quad[e].points) {
      const Eigen::Matrix2d J = jacobian(pts, qp.xi);
      const Eigen::Matrix<double, 4, 2> dN = shape_gradients_parent(qp.xi) * J.inverse().transpose();
      Point gq = Point::Zero();
      for (int a = 0; a < 4; ++a) gq += q[en[a]] * dN.row(a).transpose();
      const Point gq_l = Q * gq;

      const Eigen::Matrix2d H = Q * s.gradient(static_cast<int>(e), qp.xi) * Q.transpose();
      const Eigen::Matrix2d sig = Q * tensor(s.stress(static_cast<int>(e), qp.xi)) * Q.transpose();
      const auto [r, theta] = tip.polar(qp.x);
      if (r <= 1e-12 * r_d) continue;

      for (int mode = 0; mode < 2; ++mode) {
        const SifPair& unit = mode == 0 ? unit1 : unit2;
        const Eigen::Matrix2d sa = tensor(westergaard_stress(unit, r, theta));
        const Eigen::Matrix2d Ha = westergaard_gradient(unit, r, theta, mat);
        const Eigen::Matrix2d ea = 0.5 * (Ha + Ha.transpose());
        const double w_int = (sig.array() * ea.array()).sum();
        double integrand = -w_int * gq_l.x();
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) integrand += (sig(i, j) * Ha(i, 0) + sa(i, j) * H(i, 0)) * gq_l(j);
        (mode == 0 ? I1 : I2) += qp.w * integrand;
      }
    }
  }
  const double es = mat.e_star();
  return {0.5 * I1 * es, 0.5 * I2 * es, r_d};
}

double hoop_angle(const SifPair& K) {
  if (K.K1 == 0.0 && K.K2 == 0.0) throw Error(ErrorCode::no_direction, "both stress intensity factors vanish");
  if (!std::isfinite(K.K1) || !std::isfinite(K.K2))
    throw Error(ErrorCode::no_direction, "non-finite stress intensity factors");
  if (K.K1 == 0.0) return -2.0 * std::copysign(std::atan(1.0 / std::sqrt(2.0)), K.K2);
  const double rho = K.K2 / K.K1;
  return 2.0 * std::atan(-2.0 * rho / (1.0 + std::sqrt(1.0 + 8.0 * rho * rho)));
}

CrackPath grow_crack(const CrackPath& crack, int end, double theta_c, double da, const Bounds& bounds) {
  if (!(da > 0.0)) throw Error(ErrorCode::invalid_argument, "growth increment must be positive");
  const TipFrame f = crack.tip_frame(end);
  const double a = f.angle + theta_c;
  const Point p = f.tip + da * Point(std::cos(a), std::sin(a));
  if (p.x() <= bounds.xmin || p.x() >= bounds.xmax || p.y() <= bounds.ymin || p.y() >= bounds.ymax) {
    std::ostringstream msg;
    msg << "crack would leave the domain at (" << p.x() << ", " << p.y() << ")";
    throw Error(ErrorCode::growth_terminated, msg.str());
  }
  return crack.extended(end, p);
}

std::vector<GrowthStep> quasi_static_run(Model model, const QuadratureOptions& quad, const BoundaryConditions& bcs,
                                         const GrowthOptions& options) {
  if (options.steps < 0) throw Error(ErrorCode::invalid_argument, "negative step count");
  std::vector<GrowthStep> out;
  const double h = model.mesh.h();
  for (int step = 0; step <= options.steps; ++step) {
    const Discretization d = discretize(model, quad);
    LinearSystem sys = assemble(model, d);
    bcs(model, d, sys);
    const Solution sol(model, d, solve(sys));
    const CrackPath& crack = model.disc.cracks[options.crack];
    const TipFrame frame = crack.tip_frame(options.end);
    const SifPair K = interaction_integral(sol, frame, options.rd_factor * h);
    const double theta = hoop_angle(K);
    out.push_back({crack, K, theta});
    if (step < options.steps)
      model.disc.cracks[options.crack] = grow_crack(crack, options.end, theta, options.da, model.mesh.bounds);
  }
  return out;
}

void write_growth_csv(const std::string& path, const std::vector<GrowthStep>& steps, int end) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << "step,tip_x,tip_y,K1,K2,theta_c\n" << std::setprecision(12);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Point t = steps[k].crack.end_point(end);
    out << k << ',' << t.x() << ',' << t.y() << ',' << steps[k].K.K1 << ',' << steps[k].K.K2 << ','
        << steps[k].theta_c << '\n';
  }
}

}  // namespace xfrac
