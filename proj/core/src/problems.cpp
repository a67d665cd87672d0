#include "xfrac/problems.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "xfrac/analytic.hpp"
#include "xfrac/error.hpp"

namespace xfrac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

std::vector<int> default_meshes(const std::string& problem, bool large) {
  if (problem == "griffith" || problem == "edge") return {10, 20, 40, 80};
  if (problem == "inclined") return {large ? 100 : 50};
  if (problem == "multicrack") return {72};  // coarser meshes cannot resolve the close-tip layouts
  if (problem == "bimaterial") return {8, 16, 32, 64};
  if (problem == "dcb") return {60};
  throw Error(ErrorCode::invalid_argument, "unknown problem '" + problem + "'");
}

// Pins the rigid-body modes of a free plate: both components at the
// bottom-left node, u_y at the bottom-right node.
void pin_rigid_body(const Mesh& mesh, LinearSystem& sys) {
  const auto bottom = side_nodes(mesh, Side::bottom);
  sys.constraints[2 * bottom.front()] = 0.0;
  sys.constraints[2 * bottom.front() + 1] = 0.0;
  sys.constraints[2 * bottom.back() + 1] = 0.0;
}

void uniform_traction(const Model& m, const Discretization& d, LinearSystem& sys, Side side, Point t) {
  const auto edges = side_edges(m.mesh, side);
  add_edge_traction(m, d, sys, edges, [t](const Point&) { return t; });
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (d1 == 0.0 && d2 == 0.0) {  // collinear: overlap of the projections
    const Point u = b - a;
    const double s0 = u.dot(c - a), s1 = u.dot(d - a);
    return std::max(s0, s1) >= 0.0 && std::min(s0, s1) <= u.squaredNorm();
  }
  return d1 * d2 <= 0.0 && d3 * d4 <= 0.0;
}

}  // namespace

void BenchmarkSpec::validate() {
  if (meshes.empty()) meshes = default_meshes(problem, paper_scale);
  else default_meshes(problem, paper_scale);  // checks the problem id
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    if (meshes[k] < 2) throw Error(ErrorCode::invalid_argument, "mesh sizes must be at least 2");
    if (k > 0 && meshes[k] <= meshes[k - 1])
      throw Error(ErrorCode::invalid_argument, "mesh sizes must be strictly increasing");
  }
  if (quad.tip_points < 1) throw Error(ErrorCode::invalid_argument, "tip point budget must be positive");
  for (int b : tip_budgets)
    if (b < 1) throw Error(ErrorCode::invalid_argument, "tip point budget must be positive");
  if (alpha_ir < 0.0 || alpha_ir >= 0.5) throw Error(ErrorCode::invalid_argument, "alpha_ir must lie in [0, 0.5)");
  if (!(rd_factor > 0.0)) throw Error(ErrorCode::invalid_argument, "extraction radius factor must be positive");
  if (!(edge_ratio > 0.0)) throw Error(ErrorCode::invalid_argument, "edge crack ratio must be positive");
  for (double b : betas_deg)
    if (b < 0.0 || b > 90.0) throw Error(ErrorCode::invalid_argument, "crack angle must lie in [0, 90] degrees");
  if (!(interface_offset > -1.0 && interface_offset < 1.0))
    throw Error(ErrorCode::invalid_argument, "interface offset must lie in (-1, 1)");
  if (dcb_steps < 0 || !(dcb_da > 0.0)) throw Error(ErrorCode::invalid_argument, "bad growth parameters");
}

Solved solve_case(const ProblemCase& pc, const QuadratureOptions& quad) {
  Solved s;
  s.model = std::make_unique<Model>(pc.model);
  s.disc = std::make_unique<Discretization>(discretize(*s.model, quad));
  s.system = assemble(*s.model, *s.disc);
  pc.bcs(*s.model, *s.disc, s.system);
  s.solution = std::make_unique<Solution>(*s.model, *s.disc, solve(s.system));
  return s;
}

SifPair case_sifs(const Solved& s, const ProblemCase& pc, double rd_factor) {
  const TipFrame frame = s.model->disc.cracks[pc.crack].tip_frame(pc.end);
  return interaction_integral(*s.solution, frame, rd_factor * s.model->mesh.h());
}

// ---------------------------------------------------------------------------
// fixtures

ProblemCase griffith_case(int n, double alpha_ir, std::uint64_t seed, const GriffithFixture& f) {
  ProblemCase pc;
  const double h = f.L / n;
  pc.model.mesh = structured_mesh(n, n, {0.0, f.L, 0.0, f.L});
  if (alpha_ir > 0.0) pc.model.mesh = perturb_mesh(pc.model.mesh, alpha_ir, seed);
  // tip in the middle of the central element, crack entering from the left
  const Point tip(0.5 * f.L + 0.5 * h, 0.5 * f.L + 0.5 * h);
  pc.model.disc.cracks.emplace_back(std::vector<Point>{Point(-0.5 * h, tip.y()), tip}, std::array<bool, 2>{false, true});
  pc.model.material.base = f.material;

  const SifPair K{griffith_sif(f.sigma, f.a), 0.0, 0.0};
  const TipFrame frame = pc.model.disc.cracks[0].tip_frame(1);
  const Material mat = f.material;
  pc.exact = [K, frame, mat](const Point& x) { return near_tip_displacement(K, frame, x, mat); };
  auto exact = pc.exact;
  pc.bcs = [exact](const Model& m, const Discretization& d, LinearSystem& sys) {
    impose_boundary_field(m, d, sys, exact);
  };
  return pc;
}

double edge_reference(double a_over_w) { return edge_crack_factor(a_over_w) * griffith_sif(1.0, a_over_w); }

ProblemCase edge_case(int n, double a_over_w, EdgeSupport support) {
  edge_crack_factor(a_over_w);  // validity range
  ProblemCase pc;
  const double h = 1.0 / n;
  pc.model.mesh = structured_mesh(n, 2 * n, {0.0, 1.0, 0.0, 2.0});
  const double yc = 1.0 + 0.5 * h;
  pc.model.disc.cracks.emplace_back(std::vector<Point>{Point(-0.5 * h, yc), Point(a_over_w, yc)},
                                    std::array<bool, 2>{false, true});
  pc.model.material.base = {1e3, 0.3, Regime::plane_strain};
  pc.bcs = [support](const Model& m, const Discretization& d, LinearSystem& sys) {
    uniform_traction(m, d, sys, Side::top, Point(0.0, 1.0));
    if (support == EdgeSupport::symmetric) {
      uniform_traction(m, d, sys, Side::bottom, Point(0.0, -1.0));
      pin_rigid_body(m.mesh, sys);
    } else {
      const auto bottom = side_nodes(m.mesh, Side::bottom);
      sys.constraints[2 * bottom.front()] = 0.0;
      sys.constraints[2 * bottom.front() + 1] = 0.0;
      sys.constraints[2 * bottom.back() + 1] = 0.0;
    }
  };
  return pc;
}

ProblemCase inclined_case(int n, double beta, const InclinedFixture& f) {
  ProblemCase pc;
  pc.model.mesh = structured_mesh(n, n, {-1.0, 1.0, -1.0, 1.0});
  const Point t(std::cos(beta), std::sin(beta));
  pc.model.disc.cracks.emplace_back(std::vector<Point>{f.center - f.half_length * t, f.center + f.half_length * t},
                                    std::array<bool, 2>{true, true});
  pc.model.material.base = f.material;
  const InclinedCrackField field(f.sigma, f.half_length, beta, f.center, f.material);
  pc.exact = [field](const Point& x) { return field.displacement(x); };
  auto exact = pc.exact;
  pc.bcs = [exact](const Model& m, const Discretization& d, LinearSystem& sys) {
    impose_boundary_field(m, d, sys, exact);
  };
  return pc;
}

double multicrack_reference(const MulticrackLayout& l) { return center_crack_sif(1.0, l.a1, 0.5); }

ProblemCase multicrack_case(int n, const MulticrackLayout& l) {
  ProblemCase pc;
  pc.model.mesh = structured_mesh(n, 2 * n, {0.0, 1.0, 0.0, 2.0});
  const Point t(std::cos(l.theta), std::sin(l.theta));
  const Point c1(0.5 - 0.5 * l.L, 1.0 - 0.5 * l.H);
  const Point c2(0.5 + 0.5 * l.L, 1.0 + 0.5 * l.H);
  const double a2 = l.a1 * l.length_ratio;
  const Point p0 = c1 - l.a1 * t, p1 = c1 + l.a1 * t;
  const Point q0 = c2 - a2 * t, q1 = c2 + a2 * t;
  if (segments_cross(p0, p1, q0, q1)) throw Error(ErrorCode::unsupported_configuration, "cracks intersect");
  for (const Point& p : {p0, p1, q0, q1})
    if (p.x() <= 0.0 || p.x() >= 1.0 || p.y() <= 0.0 || p.y() >= 2.0)
      throw Error(ErrorCode::invalid_argument, "crack leaves the plate");
  pc.model.disc.cracks.emplace_back(std::vector<Point>{p0, p1}, std::array<bool, 2>{true, true});
  pc.model.disc.cracks.emplace_back(std::vector<Point>{q0, q1}, std::array<bool, 2>{true, true});
  pc.model.material.base = {3e7, 0.3, Regime::plane_strain};
  // point A: the end of crack 1 nearest crack 2
  pc.crack = 0;
  pc.end = (p1 - c2).norm() <= (p0 - c2).norm() ? 1 : 0;
  pc.bcs = [](const Model& m, const Discretization& d, LinearSystem& sys) {
    uniform_traction(m, d, sys, Side::top, Point(0.0, 1.0));
    uniform_traction(m, d, sys, Side::bottom, Point(0.0, -1.0));
    pin_rigid_body(m.mesh, sys);
  };
  return pc;
}

ProblemCase bimaterial_case(int n, const BimaterialFixture& f) {
  ProblemCase pc;
  pc.model.mesh = structured_mesh(n, n, {-1.0, 1.0, -1.0, 1.0});
  const InterfaceLine line(Point(-2.0, f.b - 2.0 * f.slope), Point(2.0, f.b + 2.0 * f.slope));
  // the interface is only enriched where it actually cuts elements
  pc.model.disc.interface = line;
  pc.model.material.base = {f.e1, 0.0, Regime::plane_strain};
  pc.model.material.interface = line;
  pc.model.material.positive = {f.e2, 0.0, Regime::plane_strain};
  if (f.slope == 0.0) {
    const double e1 = f.e1, e2 = f.e2, b = f.b;
    pc.exact = [e1, e2, b](const Point& x) { return Point(0.0, bimaterial_displacement(x.y(), e1, e2, b)); };
  }
  pc.bcs = [](const Model& m, const Discretization& d, LinearSystem& sys) {
    for (auto [side, uy] : {std::pair{Side::bottom, 0.0}, std::pair{Side::top, 1.0}}) {
      for (int node : side_nodes(m.mesh, side)) {
        sys.constraints[2 * node] = 0.0;
        sys.constraints[2 * node + 1] = uy;
        for (const auto& ed : d.dofs().enriched(node)) {
          sys.constraints[ed.index] = 0.0;
          sys.constraints[ed.index + 1] = 0.0;
        }
      }
    }
  };
  return pc;
}

ProblemCase dcb_case(double offset) {
  ProblemCase pc;
  pc.model.mesh = structured_mesh(60, 20, {0.0, 6.0, 0.0, 2.0});
  const double y = 1.0 + offset;
  pc.model.disc.cracks.emplace_back(std::vector<Point>{Point(-0.05, y), Point(2.05, y)},
                                    std::array<bool, 2>{false, true});
  pc.model.material.base = {100.0, 0.3, Regime::plane_strain};
  pc.bcs = [](const Model& m, const Discretization&, LinearSystem& sys) {
    const auto left = side_nodes(m.mesh, Side::left);
    add_point_load(sys, 2 * left.front() + 1, -1.0);
    add_point_load(sys, 2 * left.back() + 1, 1.0);
    for (int node : side_nodes(m.mesh, Side::right)) {
      sys.constraints[2 * node] = 0.0;
      sys.constraints[2 * node + 1] = 0.0;
    }
  };
  return pc;
}

// ---------------------------------------------------------------------------
// runners

std::vector<ConvergenceRow> run_griffith(const BenchmarkSpec& spec) {
  const GriffithFixture f;
  const double ref = griffith_sif(f.sigma, f.a);
  std::vector<ConvergenceRow> rows;
  for (int n : spec.meshes) {
    const ProblemCase pc = griffith_case(n, spec.alpha_ir, spec.seed, f);
    const Solved s = solve_case(pc, spec.quad);
    rows.push_back(make_row(s.model->mesh.h(), case_sifs(s, pc, spec.rd_factor).K1, ref));
  }
  fill_rates(rows);
  return rows;
}

std::vector<SweepRow> run_griffith_sweep(const BenchmarkSpec& spec) {
  const GriffithFixture f;
  const double ref = griffith_sif(f.sigma, f.a);
  const int n = spec.meshes.size() == 1 ? spec.meshes.front() : 60;
  const ProblemCase pc = griffith_case(n, spec.alpha_ir, spec.seed, f);
  std::vector<SweepRow> rows;
  for (int budget : spec.tip_budgets) {
    QuadratureOptions q = spec.quad;
    q.tip_points = budget;
    const Solved s = solve_case(pc, q);
    const double K1 = case_sifs(s, pc, spec.rd_factor).K1;
    int used = 0;
    const int tip_elem = s.disc->enr.tips.front().element;
    used = static_cast<int>(s.disc->quad[tip_elem].points.size());
    rows.push_back({used, K1, std::abs(K1 - ref) / ref});
  }
  return rows;
}

std::vector<ConvergenceRow> run_edge(const BenchmarkSpec& spec) {
  const double ref = edge_reference(spec.edge_ratio);
  std::vector<ConvergenceRow> rows;
  for (int n : spec.meshes) {
    const ProblemCase pc = edge_case(n, spec.edge_ratio, spec.edge_support);
    const Solved s = solve_case(pc, spec.quad);
    rows.push_back(make_row(s.model->mesh.h(), case_sifs(s, pc, spec.rd_factor).K1, ref));
  }
  fill_rates(rows);
  return rows;
}

std::vector<InclinedRow> run_inclined(const BenchmarkSpec& spec) {
  const InclinedFixture f;
  std::vector<InclinedRow> rows;
  for (double deg : spec.betas_deg) {
    const double beta = deg * kDeg;
    const ProblemCase pc = inclined_case(spec.meshes.back(), beta, f);
    const Solved s = solve_case(pc, spec.quad);
    const SifPair K = case_sifs(s, pc, spec.rd_factor);
    const auto [k1, k2] = inclined_crack_sifs(f.sigma, f.half_length, beta);
    rows.push_back({deg, K.K1, K.K2, k1, k2});
  }
  return rows;
}

std::vector<MulticrackRow> run_multicrack(const BenchmarkSpec& spec) {
  const int n = spec.meshes.back();
  std::vector<MulticrackRow> rows;
  auto solve_one = [&](const std::string& study, const MulticrackLayout& l) {
    const ProblemCase pc = multicrack_case(n, l);
    const Solved s = solve_case(pc, spec.quad);
    const SifPair K = case_sifs(s, pc, spec.rd_factor);
    const double ref = multicrack_reference(l);
    rows.push_back({study, l.H / l.L, l.length_ratio, l.theta / kDeg, K.K1 / ref, K.K2 / ref});
  };
  for (double ratio : {0.5, 1.0, 1.5})
    for (double hl : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      MulticrackLayout l;
      l.H = hl * l.L;
      l.length_ratio = ratio;
      solve_one("spacing", l);
    }
  for (double deg : {0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0}) {
    MulticrackLayout l;
    l.theta = deg * kDeg;
    solve_one("angle", l);
  }
  return rows;
}

BimaterialResult run_bimaterial(const BenchmarkSpec& spec) {
  BimaterialResult out;
  BimaterialFixture f;
  f.b = spec.interface_offset;
  for (int n : spec.meshes) {
    const ProblemCase pc = bimaterial_case(n, f);
    const Solved s = solve_case(pc, spec.quad);
    const double err = l2_displacement_error(s.model->mesh, s.solution->nodal_displacements(), pc.exact);
    // metric: relative nodal L2 error, compared against zero
    ConvergenceRow r;
    r.h = s.model->mesh.h();
    r.metric = err / 100.0;
    r.reference = 0.0;
    r.rel_err = r.metric;
    out.rows.push_back(r);
  }
  fill_rates(out.rows);
  for (auto [name, slope] : {std::pair{"straight", 0.0}, std::pair{"positive", 0.25}, std::pair{"negative", -0.25}}) {
    BimaterialFixture g = f;
    g.slope = slope;
    for (int n : spec.meshes) {
      const ProblemCase pc = bimaterial_case(n, g);
      const Solved s = solve_case(pc, spec.quad);
      out.energy.push_back({name, s.model->mesh.h(), strain_energy(s.system, s.solution->dofs())});
    }
  }
  return out;
}

DcbResult run_dcb(const BenchmarkSpec& spec) {
  const ProblemCase pc = dcb_case(spec.dcb_offset);
  GrowthOptions g;
  g.steps = spec.dcb_steps;
  g.da = spec.dcb_da;
  g.rd_factor = spec.rd_factor;
  g.crack = pc.crack;
  g.end = pc.end;
  DcbResult out;
  QuadratureOptions q = spec.quad;
  q.scheme = Scheme::sccm;
  out.sccm = quasi_static_run(pc.model, q, pc.bcs, g);
  q.scheme = Scheme::subcell;
  out.subcell = quasi_static_run(pc.model, q, pc.bcs, g);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << std::setprecision(12);
  return out;
}

std::string rows_summary(const std::string& what, const std::vector<ConvergenceRow>& rows) {
  std::ostringstream s;
  s << std::setprecision(6);
  for (const auto& r : rows) s << what << " h=" << r.h << " metric=" << r.metric << " rel_err=" << r.rel_err << '\n';
  if (rows.size() >= 2) s << what << " rate=" << convergence_rate(rows) << '\n';
  return s.str();
}

}  // namespace

std::string run_benchmark(BenchmarkSpec spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  const std::string& p = spec.problem;
  std::ostringstream summary;
  summary << std::setprecision(6);

  if (p == "griffith" && !spec.tip_budgets.empty()) {
    const auto rows = run_griffith_sweep(spec);
    auto out = open_out(path_in(spec.out_dir, "griffith_sweep.csv"));
    out << "tip_points,K1,rel_err\n";
    for (const auto& r : rows) {
      out << r.tip_points << ',' << r.K1 << ',' << r.rel_err << '\n';
      summary << "tip_points=" << r.tip_points << " K1=" << r.K1 << " rel_err=" << r.rel_err << '\n';
    }
  } else if (p == "griffith" || p == "edge") {
    const auto rows = p == "griffith" ? run_griffith(spec) : run_edge(spec);
    write_convergence_csv(path_in(spec.out_dir, p + "_convergence.csv"), rows);
    summary << rows_summary(p, rows);
  } else if (p == "inclined") {
    const auto rows = run_inclined(spec);
    auto out = open_out(path_in(spec.out_dir, "inclined_table.csv"));
    out << "beta_deg,K1,K2,K1_ref,K2_ref\n";
    for (const auto& r : rows) {
      out << r.beta_deg << ',' << r.K1 << ',' << r.K2 << ',' << r.K1_ref << ',' << r.K2_ref << '\n';
      summary << "beta=" << r.beta_deg << " K1=" << r.K1 << " (" << r.K1_ref << ") K2=" << r.K2 << " (" << r.K2_ref
              << ")\n";
    }
  } else if (p == "multicrack") {
    const auto rows = run_multicrack(spec);
    auto out = open_out(path_in(spec.out_dir, "multicrack_table.csv"));
    out << "study,H_over_L,length_ratio,theta_deg,K1_norm,K2_norm\n";
    for (const auto& r : rows) {
      out << r.study << ',' << r.h_over_l << ',' << r.length_ratio << ',' << r.theta_deg << ',' << r.K1_norm << ','
          << r.K2_norm << '\n';
      summary << r.study << " H/L=" << r.h_over_l << " a2/a1=" << r.length_ratio << " theta=" << r.theta_deg
              << " K1n=" << r.K1_norm << " K2n=" << r.K2_norm << '\n';
    }
  } else if (p == "bimaterial") {
    const auto res = run_bimaterial(spec);
    write_convergence_csv(path_in(spec.out_dir, "bimaterial_convergence.csv"), res.rows);
    auto out = open_out(path_in(spec.out_dir, "bimaterial_energy.csv"));
    out << "config,h,energy\n";
    for (const auto& r : res.energy) out << r.config << ',' << r.h << ',' << r.energy << '\n';
    summary << rows_summary(p, res.rows);
  } else if (p == "dcb") {
    const auto res = run_dcb(spec);
    write_growth_csv(path_in(spec.out_dir, "dcb_growth_sccm.csv"), res.sccm);
    write_growth_csv(path_in(spec.out_dir, "dcb_growth_subcell.csv"), res.subcell);
    const ProblemCase pc = dcb_case(spec.dcb_offset);
    std::vector<SvgPolyline> lines;
    lines.push_back({res.sccm.back().crack.vertices(), "#c0392b", "sccm", true});
    lines.push_back({res.subcell.back().crack.vertices(), "#2471a3", "subcell", true});
    write_svg(path_in(spec.out_dir, "dcb_path.svg"), pc.model.mesh.bounds, &pc.model.mesh, lines);
    for (const auto* run : {&res.sccm, &res.subcell}) {
      const Point t = run->back().crack.end_point(1);
      summary << (run == &res.sccm ? "sccm" : "subcell") << " final tip (" << t.x() << ", " << t.y()
              << ") K1_0=" << run->front().K.K1 << " K2_0=" << run->front().K.K2 << '\n';
    }
  }
  return summary.str();
}

}  // namespace xfrac
