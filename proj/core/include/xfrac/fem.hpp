#pragma once

// Enriched bilinear elasticity: constitutive matrices, strain operators,
// assembly, Dirichlet elimination and the sparse solve.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "xfrac/enrichment.hpp"
#include "xfrac/mesh.hpp"
#include "xfrac/quadrature.hpp"

namespace xfrac {

enum class Regime { plane_strain, plane_stress };

struct Material {
  double E = 1.0;
  double nu = 0.0;
  Regime regime = Regime::plane_strain;

  // Effective modulus used in energy release rates: E/(1 - nu^2) in plane strain.
  double e_star() const { return regime == Regime::plane_strain ? E / (1.0 - nu * nu) : E; }
  double kappa() const { return regime == Regime::plane_strain ? 3.0 - 4.0 * nu : (3.0 - nu) / (1.0 + nu); }
};

// Homogeneous material, or two materials separated by a straight interface:
// `positive` applies where signed_distance(x, interface) > 0.
struct MaterialModel {
  Material base;
  std::optional<InterfaceLine> interface;
  Material positive;

  const Material& at(const Point& x) const;
};

Eigen::Matrix3d d_matrix(const Material& m);
Eigen::Matrix3d d_matrix(const MaterialModel& m, const Point& x);

struct Model {
  Mesh mesh;
  Discontinuities disc;
  MaterialModel material;
};

struct Discretization {
  Enrichments enr;
  std::vector<QuadratureSet> quad;
  QuadratureOptions options;

  const DofMap& dofs() const { return enr.dofs; }
};

Discretization discretize(const Model& model, const QuadratureOptions& options);

// Element DOFs: per node the standard pair followed by its enriched pairs.
std::vector<int> element_dofs(const Mesh& mesh, const DofMap& dofs, int e);

// Interpolation operators at one point of element e, columns in
// element_dofs order:
//   N  (2 x n): displacement
//   G  (4 x n): du_x/dx, du_x/dy, du_y/dx, du_y/dy
struct PointOperators {
  Eigen::Matrix<double, 2, Eigen::Dynamic> N;
  Eigen::Matrix<double, 4, Eigen::Dynamic> G;

  // Engineering strain (exx, eyy, gxy) operator.
  Eigen::Matrix<double, 3, Eigen::Dynamic> B() const;
};

PointOperators point_operators(const Model& model, const Discretization& d, int e, const Point& xi,
                               const Point& x);

// Strain-displacement operator split as [B_std | B_enr] with the enriched
// columns in element_dofs order.
struct BBlocks {
  Eigen::Matrix<double, 3, Eigen::Dynamic> standard;
  Eigen::Matrix<double, 3, Eigen::Dynamic> enriched;
};
BBlocks b_matrices(const Model& model, const Discretization& d, int e, const Point& xi, const Point& x);

Eigen::MatrixXd element_stiffness(const Model& model, const Discretization& d, int e);

struct LinearSystem {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd f;
  std::map<int, double> constraints;  // dof -> prescribed value
};

// K from the element quadrature sets; f zero; no constraints.
LinearSystem assemble(const Model& model, const Discretization& d);

void add_point_load(LinearSystem& sys, int dof, double value);

enum class Side { left, right, bottom, top };
// Boundary nodes on one side of a structured (possibly perturbed) mesh,
// ordered along the side.
std::vector<int> side_nodes(const Mesh& mesh, Side side);

// Consistent loads for a traction t(x) on the listed boundary edges,
// integrated with 4 Gauss points per edge through the enriched basis.
void add_edge_traction(const Model& model, const Discretization& d, LinearSystem& sys,
                       std::span<const std::array<int, 2>> edges, const std::function<Point(const Point&)>& t);

std::vector<std::array<int, 2>> side_edges(const Mesh& mesh, Side side);

// Prescribes the displacement u(x) on the whole outer boundary: standard DOFs
// of ordinary boundary nodes take nodal values, enriched DOFs of boundary
// nodes are zero, except that nodes carrying a Heaviside enrichment have
// their standard and Heaviside DOFs fitted by least squares to u sampled
// along the boundary edges touching them.
void impose_boundary_field(const Model& model, const Discretization& d, LinearSystem& sys,
                           const std::function<Point(const Point&)>& u);

// Eliminates constraints and solves with a sparse LDL^T factorization.
// Throws singular_system when the reduced matrix is not positive definite.
Eigen::VectorXd solve(const LinearSystem& sys);

double strain_energy(const LinearSystem& sys, const Eigen::VectorXd& u);

class Solution {
 public:
  Solution(const Model& model, const Discretization& d, Eigen::VectorXd u);

  const Eigen::VectorXd& dofs() const { return u_; }
  const Model& model() const { return *model_; }
  const Discretization& discretization() const { return *disc_; }

  Point displacement(int e, const Point& xi) const;
  Eigen::Matrix2d gradient(int e, const Point& xi) const;
  Eigen::Vector3d strain(int e, const Point& xi) const;
  Eigen::Vector3d stress(int e, const Point& xi) const;
  // Full enriched expansion evaluated at a node.
  Point nodal_displacement(int node) const;
  std::vector<Point> nodal_displacements() const;

 private:
  const Model* model_;
  const Discretization* disc_;
  Eigen::VectorXd u_;
};

// 100 * sqrt(sum |u_h - u|^2 / sum |u|^2) over nodes.
double l2_displacement_error(const Mesh& mesh, std::span<const Point> uh,
                             const std::function<Point(const Point&)>& exact);

// id,x,y,ux,uy
void write_solution_csv(const std::string& path, const Mesh& mesh, std::span<const Point> u);

}  // namespace xfrac
