#include "xfrac/gauss.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "xfrac/error.hpp"

namespace xfrac {

Rule1d gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

Rule1d gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "Gauss rule needs at least one node");
  if (a <= -1.0 || b <= -1.0) throw Error(ErrorCode::invalid_argument, "Jacobi exponents must exceed -1");

  // Three-term recurrence of the monic Jacobi polynomials.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double v;
    if (k == 1) {
      // (ab + 1) cancels analytically; keeps a + b = -1 well defined.
      v = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      v = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(v);
  }

  Rule1d r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(ab + 2.0));
  if (n == 1) {
    r.nodes[0] = diag(0);
    r.weights[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    r.weights[k] = mu0 * v0 * v0;
  }
  return r;
}

const std::array<TrianglePoint, 13>& triangle_rule13() {
  // Dunavant's degree-7 rule: centroid, two 3-point orbits, one 6-point orbit.
  static const std::array<TrianglePoint, 13> rule = [] {
    constexpr double w0 = -0.149570044467682;
    constexpr double a1 = 0.260345966079040, w1 = 0.175615257433208;
    constexpr double a2 = 0.065130102902216, w2 = 0.053347235608838;
    constexpr double a3 = 0.048690315425316, b3 = 0.312865496004874, w3 = 0.077113760890257;
    const double c1 = 1.0 - 2.0 * a1, c2 = 1.0 - 2.0 * a2, c3 = 1.0 - a3 - b3;
    return std::array<TrianglePoint, 13>{{
        {1.0 / 3.0, 1.0 / 3.0, w0},
        {a1, a1, w1}, {a1, c1, w1}, {c1, a1, w1},
        {a2, a2, w2}, {a2, c2, w2}, {c2, a2, w2},
        {a3, b3, w3}, {b3, a3, w3}, {a3, c3, w3}, {c3, a3, w3}, {b3, c3, w3}, {c3, b3, w3},
    }};
  }();
  return rule;
}

}  // namespace xfrac
