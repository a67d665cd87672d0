#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "xfrac/geometry.hpp"

namespace xfrac {

struct Bounds {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

using ElementNodes = std::array<int, 4>;
using ElementPoints = std::array<Point, 4>;

// Bilinear quadrilateral mesh. Element connectivity is CCW.
struct Mesh {
  std::vector<Point> nodes;
  std::vector<ElementNodes> elements;
  Bounds bounds;
  int nx = 0;  // structured grid counts
  int ny = 0;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t element_count() const { return elements.size(); }
  ElementPoints element_points(std::size_t e) const;
  double element_area(std::size_t e) const;
  bool on_boundary(std::size_t node, double tol = 1e-12) const;
  // Elements sharing each node.
  std::vector<std::vector<int>> node_elements() const;
  // Element containing x (closed), or -1.
  int locate(const Point& x) const;
  // Characteristic element size of the structured grid.
  double h() const;
};

Mesh structured_mesh(int nx, int ny, const Bounds& bounds);

// Moves interior nodes by (2r - 1) * alpha_ir * (dx, dy) with independent
// draws per axis from a SplitMix64 stream seeded with `seed`. Boundary nodes
// stay put. A draw that makes an adjacent element non-convex is redrawn (up
// to 16 times) before failing.
Mesh perturb_mesh(const Mesh& mesh, double alpha_ir, std::uint64_t seed);

// Bilinear shape functions and their parent derivatives.
std::array<double, 4> shape_functions(const Point& xi);
Eigen::Matrix<double, 4, 2> shape_gradients_parent(const Point& xi);

Point parent_to_physical(std::span<const Point, 4> elem, const Point& xi);
Eigen::Matrix2d jacobian(std::span<const Point, 4> elem, const Point& xi);
// Newton inversion of the bilinear map from (0, 0). Throws out_of_element if
// x lies outside the closed element, non_convergence after 20 iterations.
Point physical_to_parent(std::span<const Point, 4> elem, const Point& x);

// Determinant of J at the 2x2 Gauss points, minimum.
double min_gauss_jacobian(std::span<const Point, 4> elem);
// Determinant of J at the four corners, minimum; positive iff the element is
// strictly convex.
double min_corner_jacobian(std::span<const Point, 4> elem);

// id,x,y and id,n1,n2,n3,n4 tables.
void write_mesh_csv(const Mesh& mesh, const std::string& nodes_path, const std::string& elements_path);

}  // namespace xfrac
