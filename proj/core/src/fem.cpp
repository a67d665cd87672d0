#include "xfrac/fem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "xfrac/error.hpp"
#include "xfrac/gauss.hpp"
#include "xfrac/parallel.hpp"

namespace xfrac {

const Material& MaterialModel::at(const Point& x) const {
  if (interface && signed_distance(x, *interface) > 0.0) return positive;
  return base;
}

Eigen::Matrix3d d_matrix(const Material& m) {
  if (!(m.E > 0.0) || m.nu < 0.0 || m.nu >= 0.5)
    throw Error(ErrorCode::invalid_argument, "material needs E > 0 and 0 <= nu < 0.5");
  Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
  if (m.regime == Regime::plane_strain) {
    const double c = m.E / ((1.0 + m.nu) * (1.0 - 2.0 * m.nu));
    D << 1.0 - m.nu, m.nu, 0.0,
         m.nu, 1.0 - m.nu, 0.0,
         0.0, 0.0, 0.5 - m.nu;
    D *= c;
  } else {
    const double c = m.E / (1.0 - m.nu * m.nu);
    D << 1.0, m.nu, 0.0,
         m.nu, 1.0, 0.0,
         0.0, 0.0, 0.5 * (1.0 - m.nu);
    D *= c;
  }
  return D;
}

Eigen::Matrix3d d_matrix(const MaterialModel& m, const Point& x) { return d_matrix(m.at(x)); }

Discretization discretize(const Model& model, const QuadratureOptions& options) {
  Discretization d;
  d.options = options;
  d.enr = build_enrichments(model.mesh, model.disc);
  d.quad.resize(model.mesh.element_count());
  parallel_for(model.mesh.element_count(), [&](std::size_t e) {
    const ElementPoints pts = model.mesh.element_points(e);
    const auto& cut = d.enr.cuts[e];
    std::span<const Polygon> pieces;
    bool tip = false;
    if (cut) {
      pieces = cut->clip.pieces;
      tip = cut->clip.kind == CutKind::tip;
    }
    d.quad[e] = element_rule(pts, pieces, tip, options, static_cast<int>(e));
  });
  return d;
}

std::vector<int> element_dofs(const Mesh& mesh, const DofMap& dofs, int e) {
  std::vector<int> out;
  for (int n : mesh.elements[e]) {
    out.push_back(dofs.standard(n, 0));
    out.push_back(dofs.standard(n, 1));
    for (const auto& ed : dofs.enriched(n)) {
      out.push_back(ed.index);
      out.push_back(ed.index + 1);
    }
  }
  return out;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> PointOperators::B() const {
  Eigen::Matrix<double, 3, Eigen::Dynamic> b(3, G.cols());
  b.row(0) = G.row(0);
  b.row(1) = G.row(3);
  b.row(2) = G.row(1) + G.row(2);
  return b;
}

namespace {

// Physical shape-function gradients (4 x 2).
Eigen::Matrix<double, 4, 2> physical_gradients(std::span<const Point, 4> pts, const Point& xi) {
  const Eigen::Matrix2d J = jacobian(pts, xi);
  return shape_gradients_parent(xi) * J.inverse().transpose();
}

}  // namespace

PointOperators point_operators(const Model& model, const Discretization& d, int e, const Point& xi,
                               const Point& x) {
  const Mesh& mesh = model.mesh;
  const ElementPoints pts = mesh.element_points(e);
  const auto N = shape_functions(xi);
  const auto dN = physical_gradients(pts, xi);

  int ncols = 0;
  for (int n : mesh.elements[e]) ncols += 2 + 2 * static_cast<int>(d.dofs().enriched(n).size());

  PointOperators op;
  op.N = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, ncols);
  op.G = Eigen::Matrix<double, 4, Eigen::Dynamic>::Zero(4, ncols);

  // Each distinct enrichment function is evaluated once per point.
  std::vector<std::pair<Enrichment, EnrichmentValue>> cache;
  auto value_of = [&](const Enrichment& en) -> const EnrichmentValue& {
    Enrichment key = en;
    key.func = en.kind == EnrichmentKind::branch ? en.func : 0;
    for (const auto& [k, v] : cache)
      if (k == key) return v;
    cache.emplace_back(key, evaluate_enrichment(key, x, model.disc, d.enr.tips));
    return cache.back().second;
  };

  auto put = [&](int col, double n, const Point& g) {
    op.N(0, col) = n;
    op.N(1, col + 1) = n;
    op.G(0, col) = g.x();
    op.G(1, col) = g.y();
    op.G(2, col + 1) = g.x();
    op.G(3, col + 1) = g.y();
  };

  int col = 0;
  for (int a = 0; a < 4; ++a) {
    const int node = mesh.elements[e][a];
    const Point gN = dN.row(a).transpose();
    put(col, N[a], gN);
    col += 2;
    for (const auto& ed : d.dofs().enriched(node)) {
      const EnrichmentValue& psi = value_of(ed.e);
      put(col, N[a] * psi.value, gN * psi.value + N[a] * psi.grad);
      col += 2;
    }
  }
  return op;
}

BBlocks b_matrices(const Model& model, const Discretization& d, int e, const Point& xi, const Point& x) {
  const PointOperators op = point_operators(model, d, e, xi, x);
  const auto B = op.B();
  std::vector<int> std_cols, enr_cols;
  int col = 0;
  for (int n : model.mesh.elements[e]) {
    std_cols.push_back(col);
    std_cols.push_back(col + 1);
    col += 2;
    for (std::size_t k = 0; k < d.dofs().enriched(n).size(); ++k) {
      enr_cols.push_back(col);
      enr_cols.push_back(col + 1);
      col += 2;
    }
  }
  BBlocks out;
  out.standard.resize(3, static_cast<Eigen::Index>(std_cols.size()));
  out.enriched.resize(3, static_cast<Eigen::Index>(enr_cols.size()));
  for (std::size_t k = 0; k < std_cols.size(); ++k) out.standard.col(k) = B.col(std_cols[k]);
  for (std::size_t k = 0; k < enr_cols.size(); ++k) out.enriched.col(k) = B.col(enr_cols[k]);
  return out;
}

Eigen::MatrixXd element_stiffness(const Model& model, const Discretization& d, int e) {
  Eigen::MatrixXd K;
  for (const auto& qp : d.quad[e].points) {
    const auto B = point_operators(model, d, e, qp.xi, qp.x).B();
    if (K.size() == 0) K = Eigen::MatrixXd::Zero(B.cols(), B.cols());
    K.noalias() += qp.w * B.transpose() * d_matrix(model.material, qp.x) * B;
  }
  return K;
}

LinearSystem assemble(const Model& model, const Discretization& d) {
  const std::size_t ne = model.mesh.element_count();
  std::vector<Eigen::MatrixXd> ke(ne);
  parallel_for(ne, [&](std::size_t e) { ke[e] = element_stiffness(model, d, static_cast<int>(e)); });

  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t e = 0; e < ne; ++e) {
    const auto dofs = element_dofs(model.mesh, d.dofs(), static_cast<int>(e));
    for (std::size_t i = 0; i < dofs.size(); ++i)
      for (std::size_t j = 0; j < dofs.size(); ++j)
        if (ke[e](i, j) != 0.0) trip.emplace_back(dofs[i], dofs[j], ke[e](i, j));
  }
  LinearSystem sys;
  const int n = d.dofs().total();
  sys.K.resize(n, n);
  sys.K.setFromTriplets(trip.begin(), trip.end());
  sys.f = Eigen::VectorXd::Zero(n);
  return sys;
}

void add_point_load(LinearSystem& sys, int dof, double value) { sys.f(dof) += value; }

std::vector<int> side_nodes(const Mesh& mesh, Side side) {
  const double tol = 1e-9 * std::max(mesh.bounds.width(), mesh.bounds.height());
  std::vector<std::pair<double, int>> found;
  for (std::size_t n = 0; n < mesh.node_count(); ++n) {
    const Point& p = mesh.nodes[n];
    switch (side) {
      case Side::left:
        if (std::abs(p.x() - mesh.bounds.xmin) <= tol) found.emplace_back(p.y(), static_cast<int>(n));
        break;
      case Side::right:
        if (std::abs(p.x() - mesh.bounds.xmax) <= tol) found.emplace_back(p.y(), static_cast<int>(n));
        break;
      case Side::bottom:
        if (std::abs(p.y() - mesh.bounds.ymin) <= tol) found.emplace_back(p.x(), static_cast<int>(n));
        break;
      case Side::top:
        if (std::abs(p.y() - mesh.bounds.ymax) <= tol) found.emplace_back(p.x(), static_cast<int>(n));
        break;
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<int> out;
  for (auto& [s, n] : found) out.push_back(n);
  return out;
}

std::vector<std::array<int, 2>> side_edges(const Mesh& mesh, Side side) {
  const auto nodes = side_nodes(mesh, side);
  std::vector<std::array<int, 2>> out;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) out.push_back({nodes[k], nodes[k + 1]});
  return out;
}

namespace {

int edge_element(const Mesh& mesh, const std::vector<std::vector<int>>& node_elems, int a, int b) {
  for (int e : node_elems[a]) {
    const auto& en = mesh.elements[e];
    if (std::find(en.begin(), en.end(), b) != en.end()) return e;
  }
  throw Error(ErrorCode::invalid_argument, "boundary edge does not belong to an element");
}

}  // namespace

void add_edge_traction(const Model& model, const Discretization& d, LinearSystem& sys,
                       std::span<const std::array<int, 2>> edges, const std::function<Point(const Point&)>& t) {
  const auto node_elems = model.mesh.node_elements();
  const Rule1d g = gauss_legendre(4);
  for (const auto& [a, b] : edges) {
    const int e = edge_element(model.mesh, node_elems, a, b);
    const ElementPoints pts = model.mesh.element_points(e);
    const auto dofs = element_dofs(model.mesh, d.dofs(), e);
    const Point pa = model.mesh.nodes[a], pb = model.mesh.nodes[b];
    const double half = 0.5 * (pb - pa).norm();
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const Point x = 0.5 * (pa + pb) + 0.5 * g.nodes[k] * (pb - pa);
      const Point xi = physical_to_parent(pts, x);
      const auto op = point_operators(model, d, e, xi, x);
      const Eigen::VectorXd fe = op.N.transpose() * t(x) * (g.weights[k] * half);
      for (std::size_t i = 0; i < dofs.size(); ++i) sys.f(dofs[i]) += fe(static_cast<Eigen::Index>(i));
    }
  }
}

void impose_boundary_field(const Model& model, const Discretization& d, LinearSystem& sys,
                           const std::function<Point(const Point&)>& u) {
  const Mesh& mesh = model.mesh;
  const DofMap& dofs = d.dofs();
  std::vector<std::array<int, 2>> edges;
  std::set<int> boundary;
  for (Side s : {Side::bottom, Side::right, Side::top, Side::left}) {
    for (const auto& ed : side_edges(mesh, s)) {
      edges.push_back(ed);
      boundary.insert(ed[0]);
      boundary.insert(ed[1]);
    }
  }

  std::set<int> fitted;
  for (int n : boundary) {
    bool has_h = false;
    for (const auto& ed : dofs.enriched(n)) {
      if (ed.e.kind == EnrichmentKind::heaviside) {
        has_h = true;
      } else {
        sys.constraints[ed.index] = 0.0;
        sys.constraints[ed.index + 1] = 0.0;
      }
    }
    if (has_h) {
      fitted.insert(n);
      continue;
    }
    const Point v = u(mesh.nodes[n]);
    sys.constraints[dofs.standard(n, 0)] = v.x();
    sys.constraints[dofs.standard(n, 1)] = v.y();
  }
  if (fitted.empty()) return;

  // Unknown columns: standard and Heaviside pairs of the fitted nodes.
  std::map<int, int> unknown;
  for (int n : fitted) {
    for (int c = 0; c < 2; ++c) unknown.emplace(dofs.standard(n, c), static_cast<int>(unknown.size()));
    for (const auto& ed : dofs.enriched(n)) {
      if (ed.e.kind != EnrichmentKind::heaviside) continue;
      for (int c = 0; c < 2; ++c) unknown.emplace(ed.index + c, static_cast<int>(unknown.size()));
    }
  }

  const auto node_elems = mesh.node_elements();
  const Rule1d g = gauss_legendre(10);
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (const auto& [a, b] : edges) {
    if (!fitted.count(a) && !fitted.count(b)) continue;
    const int e = edge_element(mesh, node_elems, a, b);
    const ElementPoints pts = mesh.element_points(e);
    const auto edofs = element_dofs(mesh, dofs, e);
    const Point pa = mesh.nodes[a], pb = mesh.nodes[b];
    for (double s : g.nodes) {
      const Point x = 0.5 * (pa + pb) + 0.5 * s * (pb - pa);
      PointOperators op;
      try {
        op = point_operators(model, d, e, physical_to_parent(pts, x), x);
      } catch (const Error& err) {
        if (err.code() == ErrorCode::on_discontinuity) continue;
        throw;
      }
      const Point target = u(x);
      for (int c = 0; c < 2; ++c) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(unknown.size()));
        double r = target(c);
        for (std::size_t j = 0; j < edofs.size(); ++j) {
          const double nj = op.N(c, static_cast<Eigen::Index>(j));
          if (nj == 0.0) continue;
          const auto it = unknown.find(edofs[j]);
          if (it != unknown.end()) {
            row(it->second) += nj;
          } else {
            const auto known = sys.constraints.find(edofs[j]);
            if (known != sys.constraints.end()) r -= nj * known->second;
          }
        }
        rows.push_back(row);
        rhs.push_back(r);
      }
    }
  }
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(unknown.size()));
  Eigen::VectorXd bvec(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = rows[i];
    bvec(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  const Eigen::VectorXd sol = A.completeOrthogonalDecomposition().solve(bvec);
  for (const auto& [dof, col] : unknown) sys.constraints[dof] = sol(col);
}

Eigen::VectorXd solve(const LinearSystem& sys) {
  const int n = static_cast<int>(sys.K.rows());
  std::vector<int> free_index(n, -1);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  for (const auto& [dof, v] : sys.constraints) {
    if (dof < 0 || dof >= n) throw Error(ErrorCode::invalid_argument, "constraint on a nonexistent DOF");
    u(dof) = v;
  }
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (!sys.constraints.count(i)) free_index[i] = nf++;
  if (nf == 0) return u;

  Eigen::VectorXd rhs(nf);
  for (int i = 0; i < n; ++i)
    if (free_index[i] >= 0) rhs(free_index[i]) = sys.f(i);
  std::vector<Eigen::Triplet<double>> trip;
  for (int col = 0; col < sys.K.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, col); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (free_index[r] < 0) continue;
      if (free_index[c] >= 0) {
        trip.emplace_back(free_index[r], free_index[c], it.value());
      } else {
        rhs(free_index[r]) -= it.value() * u(c);
      }
    }
  }
  Eigen::SparseMatrix<double> Kff(nf, nf);
  Kff.setFromTriplets(trip.begin(), trip.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Kff);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::singular_system, "factorization failed");
  const Eigen::VectorXd D = ldlt.vectorD();
  const double dmax = D.cwiseAbs().maxCoeff();
  if (!(D.minCoeff() > 1e-13 * dmax)) {
    std::ostringstream msg;
    msg << "stiffness matrix is singular after constraints (min pivot " << D.minCoeff() << ", max " << dmax
        << "); rigid-body modes are not restrained";
    throw Error(ErrorCode::singular_system, msg.str());
  }
  Eigen::VectorXd x = ldlt.solve(rhs);
  const double bnorm = std::max(rhs.norm(), 1e-300);
  std::vector<double> history;
  for (int it = 0; it < 3; ++it) {
    const Eigen::VectorXd r = rhs - Kff * x;
    history.push_back(r.norm() / bnorm);
    if (history.back() < 1e-10) break;
    x += ldlt.solve(r);
  }
  const double final_res = (rhs - Kff * x).norm() / bnorm;
  if (rhs.norm() > 0.0 && final_res > 1e-8) {
    std::ostringstream msg;
    msg << "linear solve residual did not drop below 1e-10:";
    for (double h : history) msg << ' ' << h;
    msg << ' ' << final_res;
    throw Error(ErrorCode::non_convergence, msg.str());
  }
  for (int i = 0; i < n; ++i)
    if (free_index[i] >= 0) u(i) = x(free_index[i]);
  return u;
}

double strain_energy(const LinearSystem& sys, const Eigen::VectorXd& u) { return 0.5 * u.dot(sys.K * u); }

Solution::Solution(const Model& model, const Discretization& d, Eigen::VectorXd u)
    : model_(&model), disc_(&d), u_(std::move(u)) {}

namespace {

Eigen::VectorXd gather(const Eigen::VectorXd& u, const std::vector<int>& dofs) {
  Eigen::VectorXd ue(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) ue(static_cast<Eigen::Index>(i)) = u(dofs[i]);
  return ue;
}

}  // namespace

Point Solution::displacement(int e, const Point& xi) const {
  const ElementPoints pts = model_->mesh.element_points(e);
  const auto op = point_operators(*model_, *disc_, e, xi, parent_to_physical(pts, xi));
  return op.N * gather(u_, element_dofs(model_->mesh, disc_->dofs(), e));
}

Eigen::Matrix2d Solution::gradient(int e, const Point& xi) const {
  const ElementPoints pts = model_->mesh.element_points(e);
  const auto op = point_operators(*model_, *disc_, e, xi, parent_to_physical(pts, xi));
  const Eigen::Vector4d g = op.G * gather(u_, element_dofs(model_->mesh, disc_->dofs(), e));
  Eigen::Matrix2d out;
  out << g(0), g(1), g(2), g(3);
  return out;
}

Eigen::Vector3d Solution::strain(int e, const Point& xi) const {
  const Eigen::Matrix2d g = gradient(e, xi);
  return {g(0, 0), g(1, 1), g(0, 1) + g(1, 0)};
}

Eigen::Vector3d Solution::stress(int e, const Point& xi) const {
  const ElementPoints pts = model_->mesh.element_points(e);
  return d_matrix(model_->material, parent_to_physical(pts, xi)) * strain(e, xi);
}

Point Solution::nodal_displacement(int node) const {
  const DofMap& dofs = disc_->dofs();
  const Point x = model_->mesh.nodes[node];
  Point v(u_(dofs.standard(node, 0)), u_(dofs.standard(node, 1)));
  for (const auto& ed : dofs.enriched(node)) {
    double psi = 0.0;
    try {
      psi = evaluate_enrichment(ed.e, x, model_->disc, disc_->enr.tips).value;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::on_discontinuity && err.code() != ErrorCode::near_tip) throw;
    }
    v += psi * Point(u_(ed.index), u_(ed.index + 1));
  }
  return v;
}

std::vector<Point> Solution::nodal_displacements() const {
  std::vector<Point> out;
  for (std::size_t n = 0; n < model_->mesh.node_count(); ++n) out.push_back(nodal_displacement(static_cast<int>(n)));
  return out;
}

double l2_displacement_error(const Mesh& mesh, std::span<const Point> uh,
                             const std::function<Point(const Point&)>& exact) {
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < mesh.node_count(); ++n) {
    const Point ue = exact(mesh.nodes[n]);
    num += (uh[n] - ue).squaredNorm();
    den += ue.squaredNorm();
  }
  if (den == 0.0) throw Error(ErrorCode::domain_error, "exact displacement is zero everywhere");
  return 100.0 * std::sqrt(num / den);
}

void write_solution_csv(const std::string& path, const Mesh& mesh, std::span<const Point> u) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << "id,x,y,ux,uy\n" << std::setprecision(17);
  for (std::size_t n = 0; n < mesh.node_count(); ++n)
    out << n << ',' << mesh.nodes[n].x() << ',' << mesh.nodes[n].y() << ',' << u[n].x() << ',' << u[n].y() << '\n';
}

}  // namespace xfrac
