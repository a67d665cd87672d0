#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "support.hpp"
#include "xfrac/enrichment.hpp"
#include "xfrac/error.hpp"
#include "xfrac/fem.hpp"
#include "xfrac/problems.hpp"

using namespace xfrac;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::optional<ElementCut>> cuts_for(const Mesh& m, const CrackPath& c) {
  Discontinuities d;
  d.cracks.push_back(c);
  return cut_elements(m, d);
}

// node index on a structured (nx + 1)-wide grid
int node(int i, int j, int nx) { return j * (nx + 1) + i; }

}  // namespace

TEST_CASE("crack crossing a 3x3 mesh enriches the two adjacent node rows") {
  const Mesh m = structured_mesh(3, 3, {});
  const CrackPath c({Point(-1, 0.5), Point(2, 0.5)}, {false, false});
  const auto sets = classify_nodes(m, c, 0, cuts_for(m, c));
  CHECK(sets.tip.empty());
  std::vector<int> expected;
  for (int j : {1, 2})
    for (int i = 0; i <= 3; ++i) expected.push_back(node(i, j, 3));
  std::sort(expected.begin(), expected.end());
  CHECK(sets.heaviside == expected);
}

TEST_CASE("interior crack: tip element nodes take precedence") {
  const Mesh m = structured_mesh(3, 3, {});
  const CrackPath c({Point(0.1, 0.5), Point(0.9, 0.5)}, {true, true});
  const auto sets = classify_nodes(m, c, 0, cuts_for(m, c));
  CHECK(sets.tip.size() == 8);
  CHECK(sets.heaviside.empty());
}

TEST_CASE("crack inside one element") {
  const Mesh m = structured_mesh(3, 3, {});
  const CrackPath c({Point(0.4, 0.5), Point(0.6, 0.5)}, {true, true});
  const auto sets = classify_nodes(m, c, 0, cuts_for(m, c));
  CHECK(sets.tip == std::vector<int>{node(1, 1, 3), node(2, 1, 3), node(1, 2, 3), node(2, 2, 3)});
  CHECK(sets.heaviside.empty());
}

TEST_CASE("Griffith 60x60 enrichment sets") {
  const ProblemCase pc = griffith_case(60);
  const Enrichments enr = build_enrichments(pc.model.mesh, pc.model.disc);
  REQUIRE(enr.tips.size() == 1);
  REQUIRE(enr.crack_sets.size() == 1);
  CHECK(enr.crack_sets[0].tip.size() == 4);
  // the crack runs from the left edge to mid-plate through one row of 30
  // elements; the tip element owns the last pair of nodes
  CHECK(enr.crack_sets[0].heaviside.size() == 60);
}

TEST_CASE("DOF numbering is contiguous") {
  const ProblemCase pc = griffith_case(20);
  const Enrichments enr = build_enrichments(pc.model.mesh, pc.model.disc);
  std::set<int> seen;
  for (std::size_t n = 0; n < pc.model.mesh.node_count(); ++n) {
    seen.insert(enr.dofs.standard(static_cast<int>(n), 0));
    seen.insert(enr.dofs.standard(static_cast<int>(n), 1));
    for (const auto& d : enr.dofs.enriched(static_cast<int>(n))) {
      seen.insert(d.index);
      seen.insert(d.index + 1);
    }
  }
  CHECK(*seen.rbegin() + 1 == enr.dofs.total());
  CHECK(static_cast<int>(seen.size()) == enr.dofs.total());
  CHECK(enr.dofs.total() == 2 * 441 + 2 * 20 + 2 * 4 * 4);
}

TEST_CASE("branch function values") {
  const auto a = branch_functions(1.0, 0.0);
  CHECK(a[0] == doctest::Approx(0.0));
  CHECK(a[1] == doctest::Approx(1.0));
  CHECK(a[2] == doctest::Approx(0.0));
  CHECK(a[3] == doctest::Approx(0.0));
  const auto b = branch_functions(4.0, kPi);
  CHECK(b[0] == doctest::Approx(2.0));
  CHECK(std::abs(b[1]) < 1e-15);
  CHECK(std::abs(b[2]) < 1e-15);
  CHECK(std::abs(b[3]) < 1e-15);
  CHECK(branch_functions(0.0, 1.0) == std::array<double, 4>{0, 0, 0, 0});
}

TEST_CASE("only the first branch function jumps across the crack faces") {
  SplitMix64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const double r = 0.01 + rng.uniform();
    const auto up = branch_functions(r, kPi), down = branch_functions(r, -kPi);
    CHECK(up[0] - down[0] == doctest::Approx(2.0 * std::sqrt(r)));
    for (int k = 1; k < 4; ++k) CHECK(std::abs(up[k] - down[k]) < 1e-14);
  }
}

TEST_CASE("branch derivatives match finite differences") {
  const TipFrame f{Point(0.2, -0.1), 0.3};
  SplitMix64 rng(4);
  const double h = 1e-6;
  auto B = [&](const Point& x) {
    const auto [r, t] = f.polar(x);
    return branch_functions(r, t);
  };
  for (int i = 0; i < 100; ++i) {
    const double r = 0.05 + rng.uniform();
    const double t = (2 * rng.uniform() - 1) * 0.95 * kPi;
    const Point x = f.tip + r * Point(std::cos(t + f.angle), std::sin(t + f.angle));
    const auto g = branch_derivatives(r, t, f);
    const auto px = B(x + Point(h, 0)), mx = B(x - Point(h, 0));
    const auto py = B(x + Point(0, h)), my = B(x - Point(0, h));
    for (int k = 0; k < 4; ++k) {
      const Point fd((px[k] - mx[k]) / (2 * h), (py[k] - my[k]) / (2 * h));
      CHECK((fd - g[k]).norm() <= 1e-6 * std::max(g[k].norm(), 1.0 / std::sqrt(r)));
    }
  }
}

TEST_CASE("branch derivatives: rotation and scaling") {
  const double r = 0.37, t = 1.1;
  const auto g0 = branch_derivatives(r, t, {Point(0, 0), 0.0});
  const double a = 0.8;
  const auto g1 = branch_derivatives(r, t, {Point(1, 2), a});
  const auto g4 = branch_derivatives(4 * r, t, {Point(0, 0), 0.0});
  Eigen::Matrix2d R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  for (int k = 0; k < 4; ++k) {
    CHECK((R.transpose() * g1[k] - g0[k]).norm() < 1e-14);
    CHECK((g4[k] - 0.5 * g0[k]).norm() < 1e-14);
  }
  CHECK_THROWS_AS(branch_derivatives(0.0, 0.0, {}), Error);
}

TEST_CASE("abs enrichment") {
  const Point n(0.6, 0.8);
  CHECK(abs_enrichment(-2.0, n).value == 2.0);
  CHECK(abs_enrichment(0.0, n).value == 0.0);
  CHECK(abs_enrichment(0.0, n).grad == n);
  CHECK((abs_enrichment(1e-3, n).grad - abs_enrichment(-1e-3, n).grad).norm() == doctest::Approx(2.0));
}

TEST_CASE("heaviside follows the crack side") {
  const CrackPath c({Point(0, 0), Point(1, 0)}, {false, true});
  CHECK(heaviside(Point(0.5, 0.1), c) == 1.0);
  CHECK(heaviside(Point(0.5, -0.1), c) == -1.0);
  CHECK(heaviside(Point(0.5, -1e-12), c) == -1.0);
  CHECK_THROWS_AS(heaviside(Point(0.5, 0.0), c), Error);
}

TEST_CASE("element cut by two discontinuities is rejected") {
  const Mesh m = structured_mesh(2, 2, {});
  Discontinuities d;
  d.cracks.push_back(CrackPath({Point(-1, 0.2), Point(2, 0.2)}, {false, false}));
  d.cracks.push_back(CrackPath({Point(-1, 0.3), Point(2, 0.3)}, {false, false}));
  try {
    cut_elements(m, d);
    FAIL("expected unsupported_configuration");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_configuration);
  }
}

TEST_CASE("partition of unity and branch reproduction") {
  const ProblemCase pc = griffith_case(10);
  const Discretization d = discretize(pc.model, {});
  REQUIRE(d.enr.tips.size() == 1);
  const int te = d.enr.tips[0].element;
  for (const auto& q : d.quad)
    for (const auto& p : q.points) {
      const auto N = shape_functions(p.xi);
      CHECK(std::abs(N[0] + N[1] + N[2] + N[3] - 1.0) < 1e-14);
    }

  const auto& mesh = pc.model.mesh;
  for (int f = 0; f < 4; ++f) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d.dofs().total());
    for (int n : mesh.elements[te]) u[d.dofs().find(n, {EnrichmentKind::branch, 0, 0, f})] = 1.0;
    const Solution s(pc.model, d, u);
    SplitMix64 rng(f + 1);
    for (int i = 0; i < 20; ++i) {
      const Point xi(1.8 * rng.uniform() - 0.9, 1.8 * rng.uniform() - 0.9);
      const Point x = parent_to_physical(mesh.element_points(te), xi);
      const auto [r, t] = d.enr.tips[0].frame.polar(x);
      if (r < 1e-6 || std::abs(std::abs(t) - kPi) < 1e-9) continue;
      const Point uh = s.displacement(te, xi);
      CHECK(std::abs(uh.x() - branch_functions(r, t)[f]) < 1e-12);
      CHECK(std::abs(uh.y()) < 1e-15);
    }
  }
}
