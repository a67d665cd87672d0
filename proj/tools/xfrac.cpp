// xfrac <problem> [options]: runs one benchmark and writes its CSV/SVG files.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xfrac/error.hpp"
#include "xfrac/problems.hpp"

namespace {

void fail(std::string_view code, std::string_view message) {
  std::cerr << "xfrac-error code=" << code << " message=\"" << message << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XFEM fracture benchmarks with conformal-mapping quadrature"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  xfrac::BenchmarkSpec spec;
  std::string scheme = "sccm", rule = "midpoint", support = "symmetric";
  std::vector<int> tip_points;

  app.add_option("problem", spec.problem, "griffith | edge | inclined | multicrack | bimaterial | dcb")
      ->required()
      ->check(CLI::IsMember({"griffith", "edge", "inclined", "multicrack", "bimaterial", "dcb"}));
  app.add_option("--mesh", spec.meshes, "elements along x, comma separated")->delimiter(',');
  app.add_option("--scheme", scheme, "cut-element quadrature")->check(CLI::IsMember({"sccm", "subcell"}));
  app.add_option("--rule", rule, "disk rule for sccm")->check(CLI::IsMember({"midpoint", "chebyshev"}));
  app.add_option("--tip-points", tip_points, "tip-element point budget; several values run the griffith sweep")
      ->delimiter(',');
  app.add_option("--alpha-ir", spec.alpha_ir, "interior node perturbation (fraction of h)");
  app.add_option("--seed", spec.seed, "perturbation seed");
  app.add_option("--out", spec.out_dir, "output directory");
  app.add_flag("--paper-scale", spec.paper_scale, "use the larger reference meshes (inclined 100x100)");
  app.add_option("--rd-factor", spec.rd_factor, "interaction-integral radius in element sizes");
  app.add_option("--edge-ratio", spec.edge_ratio, "edge crack a/W");
  app.add_option("--edge-support", support, "edge crack supports")->check(CLI::IsMember({"symmetric", "corners"}));
  app.add_option("--beta", spec.betas_deg, "inclined crack angles in degrees")->delimiter(',');
  app.add_option("--interface-offset", spec.interface_offset, "bimaterial interface height b");
  app.add_option("--dcb-offset", spec.dcb_offset, "dcb crack offset above the midline");
  app.add_option("--steps", spec.dcb_steps, "dcb growth steps");
  app.add_option("--da", spec.dcb_da, "dcb growth increment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    fail("invalid_argument", e.what());
    return 2;
  }

  try {
    spec.quad.scheme = xfrac::parse_scheme(scheme);
    spec.quad.rule = xfrac::parse_disk_rule(rule);
    spec.edge_support = support == "corners" ? xfrac::EdgeSupport::corners : xfrac::EdgeSupport::symmetric;
    if (tip_points.size() == 1) spec.quad.tip_points = tip_points.front();
    if (tip_points.size() > 1) spec.tip_budgets = tip_points;
    std::cout << xfrac::run_benchmark(spec);
  } catch (const xfrac::Error& e) {
    fail(xfrac::to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    fail("internal", e.what());
    return 1;
  }
  return 0;
}
