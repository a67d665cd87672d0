#pragma once

// The six benchmark problems: model construction, boundary conditions,
// sweeps and their output files.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "xfrac/fem.hpp"
#include "xfrac/fracture.hpp"
#include "xfrac/report.hpp"

namespace xfrac {

enum class EdgeSupport {
  corners,   // bottom-left pinned, bottom-right on a roller, traction on top
  symmetric  // traction on top and bottom, rigid-body modes pinned
};

struct BenchmarkSpec {
  std::string problem;      // griffith, edge, inclined, multicrack, bimaterial, dcb
  std::vector<int> meshes;  // elements along x; empty selects the problem default
  QuadratureOptions quad;
  std::vector<int> tip_budgets;  // griffith: point-budget sweep instead of refinement
  double alpha_ir = 0.0;
  std::uint64_t seed = 1;
  double rd_factor = 2.0;  // interaction-integral radius in element sizes
  bool paper_scale = false;
  std::string out_dir = ".";

  double edge_ratio = 0.3;  // a / plate width
  EdgeSupport edge_support = EdgeSupport::symmetric;
  std::vector<double> betas_deg = {0, 15, 30, 45, 60, 75, 90};
  double interface_offset = -1.0 / 3.0;  // b
  double dcb_offset = 0.01;              // crack height above the midline
  int dcb_steps = 8;
  double dcb_da = 0.15;

  // Fills default meshes and checks ranges (invalid_argument).
  void validate();
};

// A model with its loading; `exact` is set when a closed form exists.
struct ProblemCase {
  Model model;
  BoundaryConditions bcs;
  int crack = 0;  // tip used for SIF extraction
  int end = 1;
  std::function<Point(const Point&)> exact;
};

struct Solved {
  std::unique_ptr<Model> model;
  std::unique_ptr<Discretization> disc;
  LinearSystem system;
  std::unique_ptr<Solution> solution;
};

Solved solve_case(const ProblemCase& pc, const QuadratureOptions& quad);
SifPair case_sifs(const Solved& s, const ProblemCase& pc, double rd_factor);

// Problem fixtures. `n` is the element count along x.
struct GriffithFixture {
  double L = 10.0;
  double a = 100.0;
  double sigma = 1e4;
  Material material{3e7, 0.3, Regime::plane_strain};
};
ProblemCase griffith_case(int n, double alpha_ir = 0.0, std::uint64_t seed = 1, const GriffithFixture& f = {});

ProblemCase edge_case(int n, double a_over_w, EdgeSupport support);
// F(a/W) sigma sqrt(pi a) for the unit-width, unit-stress plate
double edge_reference(double a_over_w);

struct InclinedFixture {
  double half_length = 0.4;
  double sigma = 1.0;
  Point center{0.013, 0.007};
  Material material{1e3, 0.3, Regime::plane_strain};
};
ProblemCase inclined_case(int n, double beta, const InclinedFixture& f = {});

struct MulticrackLayout {
  double H = 0.1;             // vertical centre offset
  double L = 0.2;             // horizontal centre offset
  double a1 = 0.1;            // half-length of crack 1
  double length_ratio = 1.0;  // a2 / a1
  double theta = 0.0;         // both cracks, radians
};
ProblemCase multicrack_case(int n, const MulticrackLayout& layout);
double multicrack_reference(const MulticrackLayout& layout);

struct BimaterialFixture {
  double e1 = 1.0;  // below the interface
  double e2 = 10.0;
  double b = -1.0 / 3.0;
  double slope = 0.0;
};
ProblemCase bimaterial_case(int n, const BimaterialFixture& f);

ProblemCase dcb_case(double offset);

// Runners.
std::vector<ConvergenceRow> run_griffith(const BenchmarkSpec& spec);

struct SweepRow {
  int tip_points = 0;
  double K1 = 0.0;
  double rel_err = 0.0;
};
std::vector<SweepRow> run_griffith_sweep(const BenchmarkSpec& spec);

std::vector<ConvergenceRow> run_edge(const BenchmarkSpec& spec);

struct InclinedRow {
  double beta_deg = 0.0;
  double K1 = 0.0, K2 = 0.0;
  double K1_ref = 0.0, K2_ref = 0.0;
};
std::vector<InclinedRow> run_inclined(const BenchmarkSpec& spec);

struct MulticrackRow {
  std::string study;  // spacing or angle
  double h_over_l = 0.0;
  double length_ratio = 0.0;
  double theta_deg = 0.0;
  double K1_norm = 0.0;
  double K2_norm = 0.0;
};
std::vector<MulticrackRow> run_multicrack(const BenchmarkSpec& spec);

struct EnergyRow {
  std::string config;  // straight, positive, negative
  double h = 0.0;
  double energy = 0.0;
};
struct BimaterialResult {
  std::vector<ConvergenceRow> rows;
  std::vector<EnergyRow> energy;
};
BimaterialResult run_bimaterial(const BenchmarkSpec& spec);

struct DcbResult {
  std::vector<GrowthStep> sccm;
  std::vector<GrowthStep> subcell;
};
DcbResult run_dcb(const BenchmarkSpec& spec);

// Runs spec.problem and writes its files into spec.out_dir. Returns a short
// human-readable summary.
std::string run_benchmark(BenchmarkSpec spec);

}  // namespace xfrac
