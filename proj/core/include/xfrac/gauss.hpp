#pragma once

// One-dimensional Gauss rules and the triangle rule used by subcells.

#include <array>
#include <vector>

namespace xfrac {

struct Rule1d {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre on [-1, 1].
Rule1d gauss_legendre(int n);

// n-point Gauss-Jacobi on [-1, 1] for the weight (1 - t)^a (1 + t)^b,
// a, b > -1 (Golub-Welsch).
Rule1d gauss_jacobi(int n, double a, double b);

struct TrianglePoint {
  double l1;  // barycentric coordinates of vertices 1 and 2; vertex 0 gets 1 - l1 - l2
  double l2;
  double weight;  // fraction of the triangle area
};

// 13-point degree-7 symmetric rule on a triangle; weights sum to 1.
const std::array<TrianglePoint, 13>& triangle_rule13();

}  // namespace xfrac
