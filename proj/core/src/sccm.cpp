#include "xfrac/sccm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "xfrac/error.hpp"
#include "xfrac/gauss.hpp"

namespace xfrac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

Complex to_complex(const Point& p) { return {p.x(), p.y()}; }

}  // namespace

std::vector<double> turning_exponents(const Polygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  std::vector<double> beta(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Point d_in = v[k] - v[(k + n - 1) % n];
    const Point d_out = v[(k + 1) % n] - v[k];
    const double turn = std::atan2(cross(d_in, d_out), d_in.dot(d_out));
    if (std::abs(std::abs(turn) - kPi) < 1e-12)
      throw Error(ErrorCode::degenerate_geometry, "polygon has a zero or full interior angle");
    // interior angle alpha = pi - turn, beta = alpha/pi - 1
    beta[k] = -turn / kPi;
    sum += beta[k];
  }
  if (std::abs(sum + 2.0) > 1e-9)
    throw Error(ErrorCode::degenerate_geometry, "polygon is not simple and counter-clockwise");
  // Distribute the round-off so the closure condition holds to machine precision.
  const double fix = (sum + 2.0) / static_cast<double>(n);
  for (auto& b : beta) b -= fix;
  return beta;
}

void ConformalMap::set_prevertices(std::vector<double> args) {
  args_ = std::move(args);
  prevertices_.resize(args_.size());
  for (std::size_t k = 0; k < args_.size(); ++k) prevertices_[k] = std::polar(1.0, args_[k]);
  // The anchored prevertex sits exactly at 1.
  if (!args_.empty() && args_.back() == 0.0) prevertices_.back() = Complex(1.0, 0.0);
}

ConformalMap make_map(std::vector<Complex> vertices, std::vector<double> prevertex_args, Complex scale,
                      Complex offset, int nodes_per_interval) {
  ConformalMap m;
  std::vector<Point> pts;
  for (const auto& w : vertices) pts.emplace_back(w.real(), w.imag());
  m.vertices_ = std::move(vertices);
  m.betas_ = turning_exponents(Polygon(pts));
  m.nodes_ = nodes_per_interval;
  const Rule1d leg = gauss_legendre(m.nodes_);
  m.leg_nodes_ = leg.nodes;
  m.leg_weights_ = leg.weights;
  for (double b : m.betas_) {
    const Rule1d jr = gauss_jacobi(m.nodes_, 0.0, b);
    m.jac_nodes_.push_back(jr.nodes);
    m.jac_weights_.push_back(jr.weights);
  }
  m.set_prevertices(std::move(prevertex_args));
  m.scale_ = scale;
  m.offset_ = offset;
  return m;
}

Complex ConformalMap::integrate_simple(Complex a, Complex b, int sing_a, int sing_b) const {
  const Complex h = 0.5 * (b - a);
  const Complex m = 0.5 * (a + b);
  const std::size_t n = prevertices_.size();

  const std::vector<double>* nodes = &leg_nodes_;
  const std::vector<double>* weights = &leg_weights_;
  double flip = 1.0;
  int sing = -1;
  Complex factor(1.0, 0.0);
  if (sing_a >= 0) {
    sing = sing_a;
    nodes = &jac_nodes_[sing];
    weights = &jac_weights_[sing];
    // 1 - s/z_k = -h (1 + t) / z_k along the chord
    factor = std::pow(-h / prevertices_[sing], betas_[sing]);
  } else if (sing_b >= 0) {
    sing = sing_b;
    nodes = &jac_nodes_[sing];
    weights = &jac_weights_[sing];
    flip = -1.0;
    // 1 - s/z_k = h (1 - t) / z_k
    factor = std::pow(h / prevertices_[sing], betas_[sing]);
  }

  Complex sum(0.0, 0.0);
  for (std::size_t j = 0; j < nodes->size(); ++j) {
    const Complex s = m + h * (flip * (*nodes)[j]);
    Complex log_sum(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (static_cast<int>(k) == sing || betas_[k] == 0.0) continue;
      log_sum += betas_[k] * std::log(1.0 - s / prevertices_[k]);
    }
    sum += (*weights)[j] * std::exp(log_sum);
  }
  return h * factor * sum;
}

Complex ConformalMap::integrate(Complex a, Complex b, int sing_a, int sing_b) const {
  if (sing_a >= 0 && sing_b >= 0) {
    const Complex mid = 0.5 * (a + b);
    return integrate(a, mid, sing_a, -1) + integrate(mid, b, -1, sing_b);
  }
  struct Job {
    Complex a, b;
    int sa, sb;
    int depth;
  };
  Complex total(0.0, 0.0);
  std::vector<Job> stack{{a, b, sing_a, sing_b, 0}};
  while (!stack.empty()) {
    const Job job = stack.back();
    stack.pop_back();
    const double len = std::abs(job.b - job.a);
    if (!std::isfinite(len)) return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    if (len == 0.0) continue;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < prevertices_.size(); ++k) {
      if (static_cast<int>(k) == job.sa || static_cast<int>(k) == job.sb || betas_[k] == 0.0) continue;
      dmin = std::min(dmin, segment_distance(prevertices_[k], job.a, job.b));
    }
    if (dmin >= len || job.depth >= 60) {
      total += integrate_simple(job.a, job.b, job.sa, job.sb);
      continue;
    }
    const Complex mid = 0.5 * (job.a + job.b);
    stack.push_back({job.a, mid, job.sa, -1, job.depth + 1});
    stack.push_back({mid, job.b, -1, job.sb, job.depth + 1});
  }
  return total;
}

Point conformal_center(const Polygon& poly) {
  const Point c = poly.centroid();
  if (contains(poly, c) && distance_to_boundary(poly, c) > 0.05 * poly.diameter() / std::sqrt(poly.size()))
    return c;
  // Incenter of the ear-clipping triangle with the largest inscribed circle.
  Point best = c;
  double best_r = -1.0;
  for (const auto& t : ear_clip(poly)) {
    const double a = (t[1] - t[2]).norm(), b = (t[2] - t[0]).norm(), cc = (t[0] - t[1]).norm();
    const double per = a + b + cc;
    const double area = 0.5 * std::abs(cross(t[1] - t[0], t[2] - t[0]));
    const double r = 2.0 * area / per;
    if (r > best_r) {
      best_r = r;
      best = (a * t[0] + b * t[1] + cc * t[2]) / per;
    }
  }
  return best;
}

namespace {

class ParameterProblem {
 public:
  ParameterProblem(const Polygon& poly, const ScOptions& opts) : opts_(opts) {
    for (const auto& p : poly.vertices()) w_.push_back(to_complex(p));
    n_ = w_.size();
    center_ = to_complex(conformal_center(poly));
    for (std::size_t k = 0; k < n_; ++k) side_.push_back(std::abs(w_[(k + 1) % n_] - w_[k]));
    std::vector<double> args(n_, 0.0);
    map_ = make_map(w_, args, Complex(1.0, 0.0), center_, opts.nodes_per_interval);
  }

  std::size_t unknowns() const { return n_ - 1; }

  // Gap between consecutive prevertices ending at z_k, k = 0..n-1, where
  // z_{n-1} = 1 anchors the rotation.
  std::vector<double> args_from(const Eigen::VectorXd& y) const {
    double denom = 1.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) denom += std::exp(y(k));
    std::vector<double> args(n_);
    double theta = 0.0;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      theta += kTwoPi * std::exp(y(static_cast<Eigen::Index>(k))) / denom;
      args[k] = theta;
    }
    args[n_ - 1] = 0.0;
    return args;
  }

  double min_gap(const std::vector<double>& args) const {
    double g = args[0];
    for (std::size_t k = 1; k + 1 < n_; ++k) g = std::min(g, args[k] - args[k - 1]);
    g = std::min(g, kTwoPi - args[n_ - 2]);
    return g;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& y) {
    map_.set_prevertices(args_from(y));
    const auto& z = map_.prevertices();
    Eigen::VectorXd r(static_cast<Eigen::Index>(n_ - 1));
    const Complex i0 = map_.integrate(z[0], z[1], 0, 1);
    const double log_i0 = std::log(std::abs(i0));
    for (std::size_t k = 1; k + 2 < n_; ++k) {
      const Complex ik = map_.integrate(z[k], z[k + 1], static_cast<int>(k), static_cast<int>(k + 1));
      r(static_cast<Eigen::Index>(k - 1)) = std::log(std::abs(ik)) - log_i0 - std::log(side_[k] / side_[0]);
    }
    const Complex j0 = map_.integrate(Complex(0.0, 0.0), z[0], -1, 0);
    const Complex jn = map_.integrate(Complex(0.0, 0.0), z[n_ - 1], -1, static_cast<int>(n_ - 1));
    const Complex rho = (jn / j0) / ((w_[n_ - 1] - center_) / (w_[0] - center_));
    r(static_cast<Eigen::Index>(n_ - 3)) = std::log(std::abs(rho));
    r(static_cast<Eigen::Index>(n_ - 2)) = std::arg(rho);
    return r;
  }

  // Initial gaps proportional to the angle each side subtends at the center.
  Eigen::VectorXd subtended_guess() const {
    std::vector<double> g(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      // gap ending at z_k spans side k-1 (w_{k-1} -> w_k)
      const Complex a = w_[(k + n_ - 1) % n_] - center_;
      const Complex b = w_[k] - center_;
      g[k] = std::max(std::arg(b / a), 1e-3);
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(n_ - 1));
    for (std::size_t k = 0; k + 1 < n_; ++k) y(static_cast<Eigen::Index>(k)) = std::log(g[k] / g[n_ - 1]);
    return y;
  }

  // Least-squares scale over all vertices, f(0) at the center.
  Complex fit_scale(const Eigen::VectorXd& y) {
    map_.set_prevertices(args_from(y));
    const auto& z = map_.prevertices();
    Complex num(0.0, 0.0);
    double den = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      const Complex jk = map_.integrate(Complex(0.0, 0.0), z[k], -1, static_cast<int>(k));
      num += std::conj(jk) * (w_[k] - center_);
      den += std::norm(jk);
    }
    return num / den;
  }

  Complex center() const { return center_; }

  ConformalMap map_;

 private:
  ScOptions opts_;
  std::vector<Complex> w_;
  std::vector<double> side_;
  Complex center_;
  std::size_t n_ = 0;
};

}  // namespace

ConformalMap solve_parameter_problem(const Polygon& input, const ScOptions& opts) {
  const Polygon poly = input.normalized();
  ParameterProblem prob(poly, opts);
  const auto m = static_cast<Eigen::Index>(prob.unknowns());

  double crowded_gap = -1.0;  // smallest gap seen by an attempt that crowded
  auto crowded = [&](const Eigen::VectorXd& y) {
    const double gap = prob.min_gap(prob.args_from(y));
    if (gap >= opts.crowding_gap) return false;
    crowded_gap = crowded_gap < 0.0 ? gap : std::min(crowded_gap, gap);
    return true;
  };

  // Damped Newton with a forward-difference Jacobian.
  auto newton = [&](Eigen::VectorXd& y, double& res, int& iters) -> bool {
    Eigen::VectorXd r = prob.residual(y);
    res = r.lpNorm<Eigen::Infinity>();
    int slow = 0;
    for (iters = 0; iters < opts.max_iterations; ++iters) {
      if (!std::isfinite(res)) return false;
      if (res < opts.tol) break;
      // stalled at the quadrature noise floor
      if (slow >= 3 && res < 1e-7) break;
      Eigen::MatrixXd jac(m, m);
      for (Eigen::Index k = 0; k < m; ++k) {
        Eigen::VectorXd yp = y;
        const double step = 1e-7 * std::max(1.0, std::abs(y(k)));
        yp(k) += step;
        jac.col(k) = (prob.residual(yp) - r) / step;
      }
      Eigen::VectorXd dy = jac.colPivHouseholderQr().solve(r);
      if (!dy.allFinite()) return false;
      // keep each step within a factor e^2 change of any gap ratio
      const double big = dy.lpNorm<Eigen::Infinity>();
      if (big > 2.0) dy *= 2.0 / big;
      double lambda = 1.0;
      bool accepted = false;
      for (int h = 0; h < 30 && !accepted; ++h, lambda *= 0.5) {
        const Eigen::VectorXd yt = y - lambda * dy;
        const Eigen::VectorXd rt = prob.residual(yt);
        if (rt.allFinite() && rt.norm() < r.norm()) {
          slow = rt.norm() > 0.5 * r.norm() ? slow + 1 : 0;
          y = yt;
          r = rt;
          res = r.lpNorm<Eigen::Infinity>();
          accepted = true;
        }
      }
      if (crowded(y)) return false;
      if (!accepted) break;  // no further decrease; judged below
    }
    // a stalled solve is still accepted if the vertices are reproduced (checked below)
    if (!(res < std::max(opts.tol, 1e-7))) return false;
    return !crowded(y);
  };

  double res = std::numeric_limits<double>::infinity();
  int iters = 0;
  Eigen::VectorXd y = prob.subtended_guess();
  bool ok = newton(y, res, iters);
  if (!ok) {
    y = Eigen::VectorXd::Zero(m);
    ok = newton(y, res, iters);
  }
  if (!ok && crowded_gap >= 0.0) {
    std::ostringstream msg;
    msg << "prevertex crowding (min gap " << crowded_gap << " rad)";
    throw Error(ErrorCode::crowding, msg.str());
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "SC parameter problem did not converge (residual " << res << ")";
    throw Error(ErrorCode::solver_failure, msg.str());
  }

  ConformalMap map = prob.map_;
  map.scale_ = prob.fit_scale(y);
  map.set_prevertices(prob.args_from(y));
  map.offset_ = prob.center();
  map.residual_ = res;
  map.iterations_ = iters;
  const double vtx = vertex_reproduction_error(map);
  if (!(vtx <= 1e-6 * poly.diameter())) {
    std::ostringstream msg;
    msg << "SC map does not reproduce the polygon (vertex error " << vtx << ")";
    throw Error(ErrorCode::solver_failure, msg.str());
  }
  return map;
}

Complex map_eval(const ConformalMap& map, Complex z) {
  if (std::abs(z) > 1.0 + 1e-12) throw Error(ErrorCode::domain_error, "map_eval outside the closed unit disk");
  const auto& pv = map.prevertices();
  for (std::size_t k = 0; k < pv.size(); ++k) {
    if (std::abs(z - pv[k]) < 1e-14)
      return map.offset() + map.scale() * map.integrate(Complex(0.0, 0.0), pv[k], -1, static_cast<int>(k));
  }
  return map.offset() + map.scale() * map.integrate(Complex(0.0, 0.0), z, -1, -1);
}

Complex map_derivative(const ConformalMap& map, Complex z) {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::domain_error, "map_derivative needs |z| < 1");
  Complex log_sum(0.0, 0.0);
  const auto& pv = map.prevertices();
  const auto& beta = map.betas();
  for (std::size_t k = 0; k < pv.size(); ++k) log_sum += beta[k] * std::log(1.0 - z / pv[k]);
  return map.scale() * std::exp(log_sum);
}

double vertex_reproduction_error(const ConformalMap& map) {
  double err = 0.0;
  const auto& pv = map.prevertices();
  for (std::size_t k = 0; k < pv.size(); ++k)
    err = std::max(err, std::abs(map_eval(map, pv[k]) - map.vertices()[k]));
  return err;
}

DiskRule midpoint_disk_rule(int n_r, int n_t) {
  if (n_r < 1 || n_t < 1) throw Error(ErrorCode::invalid_argument, "midpoint disk rule needs n_r, n_t >= 1");
  DiskRule rule;
  const double dt = kTwoPi / n_t;
  for (int i = 1; i <= n_r; ++i) {
    const double ri = static_cast<double>(i - 1) / n_r;
    const double ro = static_cast<double>(i) / n_r;
    const double r = (i - 0.5) / n_r;
    const double w = 0.5 * (ro * ro - ri * ri) * dt;
    for (int m = 1; m <= n_t; ++m) {
      rule.points.push_back(std::polar(r, (m - 0.5) * dt));
      rule.weights.push_back(w);
    }
  }
  return rule;
}

DiskRule chebyshev_disk_rule(int n_r, int n_t) {
  if (n_r < 1 || n_t < 2) throw Error(ErrorCode::invalid_argument, "Gauss-Chebyshev disk rule needs n_r >= 1, n_t >= 2");
  const Rule1d gl = gauss_legendre(n_r);
  DiskRule rule;
  const double dt = kTwoPi / n_t;
  for (int i = 0; i < n_r; ++i) {
    // u = r^2 on [0, 1]: dA = r dr dtheta = du dtheta / 2
    const double u = 0.5 * (gl.nodes[i] + 1.0);
    const double wu = 0.5 * gl.weights[i];
    const double r = std::sqrt(u);
    for (int m = 0; m < n_t; ++m) {
      rule.points.push_back(std::polar(r, m * dt));
      rule.weights.push_back(0.5 * wu * dt);
    }
  }
  return rule;
}

std::vector<WeightedPoint> polygon_quadrature(const ConformalMap& map, const DiskRule& rule) {
  std::vector<WeightedPoint> out;
  out.reserve(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const Complex z = rule.points[j];
    const Complex x = map_eval(map, z);
    const double w = rule.weights[j] * std::norm(map_derivative(map, z));
    out.push_back({Point(x.real(), x.imag()), w});
  }
  return out;
}

std::vector<WeightedPoint> polygon_quadrature(const Polygon& poly, const DiskRule& rule, const ScOptions& opts) {
  return polygon_quadrature(solve_parameter_problem(poly, opts), rule);
}

std::string map_to_json(const ConformalMap& map) {
  using nlohmann::json;
  json j;
  json verts = json::array();
  for (const auto& w : map.vertices()) verts.push_back({w.real(), w.imag()});
  j["vertices"] = verts;
  j["prevertex_args"] = map.prevertex_args();
  j["betas"] = map.betas();
  j["C"] = {map.scale().real(), map.scale().imag()};
  j["A"] = {map.offset().real(), map.offset().imag()};
  j["residual"] = map.residual();
  j["vertex_error"] = vertex_reproduction_error(map);
  return j.dump(2);
}

}  // namespace xfrac
