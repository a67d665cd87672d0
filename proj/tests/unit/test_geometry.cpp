#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "xfrac/error.hpp"
#include "xfrac/geometry.hpp"

using namespace xfrac;
using xfrac::testing::rel_err;

namespace {

const std::array<Point, 4> kUnit{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};

double piece_area_sum(const ClipResult& c) {
  double s = 0.0;
  for (const auto& p : c.pieces) s += signed_area(p);
  return s;
}

bool has_vertex(const Polygon& p, const Point& x) {
  return std::any_of(p.vertices().begin(), p.vertices().end(), [&](const Point& v) { return v == x; });
}

// no two non-adjacent edges intersect
bool is_simple(const Polygon& p) {
  const std::size_t n = p.size();
  auto crosses = [](Point a, Point b, Point c, Point d) {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return d1 * d2 < 0.0 && d3 * d4 < 0.0;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (crosses(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("signed area of simple shapes") {
  CHECK(signed_area(Polygon({Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)})) == doctest::Approx(1.0));
  CHECK(signed_area(Polygon({Point(0, 1), Point(1, 1), Point(1, 0), Point(0, 0)})) == doctest::Approx(-1.0));
  CHECK(signed_area(Polygon({Point(0, 0), Point(1, 0), Point(0, 1)})) == doctest::Approx(0.5));
}

TEST_CASE("degenerate polygon is rejected") {
  try {
    signed_area(Polygon({Point(0, 0), Point(1, 0), Point(2, 0)}));
    FAIL("expected degenerate_geometry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_geometry);
  }
}

TEST_CASE("side of a horizontal crack") {
  const CrackPath c({Point(0, 0), Point(1, 0)}, {false, true});
  CHECK(side_of_path(Point(0.5, 0.3), c) == 1);
  CHECK(side_of_path(Point(0.5, -0.3), c) == -1);
  CHECK_THROWS_AS(side_of_path(Point(0.5, 0.0), c), Error);
}

TEST_CASE("side of a kinked crack beyond its tip") {
  const CrackPath c({Point(-1, 0), Point(0, 0), Point(1, 1)}, {false, true});
  const Point tip(1, 1);
  const Point t = Point(1, 1).normalized();
  SplitMix64 rng(3);
  for (int i = 0; i < 200; ++i) {
    // beyond the tip: the sign is the side of the tangent extension
    const Point x = tip + (0.5 + rng.uniform()) * t + (2.0 * rng.uniform() - 1.0) * Point(-t.y(), t.x());
    const double offset = cross(t, x - tip);
    if (std::abs(offset) < 1e-6) continue;
    CHECK(side_of_path(x, c) == (offset > 0 ? 1 : -1));
  }
}

TEST_CASE("side_of_path is constant on each side") {
  const CrackPath c({Point(-2, 0.1), Point(-0.2, -0.1), Point(0.4, 0.3), Point(2, 0.2)}, {false, false});
  SplitMix64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double x = 4.0 * rng.uniform() - 2.0;
    // region strictly above / below every segment of the path
    CHECK(side_of_path(Point(x, 0.35 + rng.uniform()), c) == 1);
    CHECK(side_of_path(Point(x, -0.15 - rng.uniform()), c) == -1);
  }
}

TEST_CASE("signed distance to interfaces") {
  const InterfaceLine flat(Point(0, 0), Point(1, 0));
  CHECK(signed_distance(Point(3, 2), flat) == doctest::Approx(2.0));
  CHECK(signed_distance(Point(7, 0), flat) == doctest::Approx(0.0));

  const InterfaceLine slanted(Point(0, -1), Point(0.2, 1));
  const Point x(1, 0);
  const double expected = (x - slanted.a).dot(slanted.unit_normal());
  CHECK(signed_distance(x, slanted) == doctest::Approx(expected).epsilon(1e-14));
  // normal points to the left of a->b: (1, 0) lies to the right
  CHECK(expected < 0.0);
}

TEST_CASE("straight crack splits the unit square in halves") {
  const CrackPath c({Point(-1, 0.5), Point(2, 0.5)}, {false, false});
  const auto r = clip_element(kUnit, c);
  REQUIRE(r.kind == CutKind::split);
  REQUIRE(r.pieces.size() == 2);
  for (const auto& p : r.pieces) CHECK(signed_area(p) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.sides[0] == -r.sides[1]);
}

TEST_CASE("tip element pieces share the tip vertex") {
  const CrackPath c({Point(-1, 0.5), Point(0.5, 0.5)}, {false, true});
  const auto r = clip_element(kUnit, c);
  REQUIRE(r.kind == CutKind::tip);
  REQUIRE(r.pieces.size() == 2);
  CHECK(piece_area_sum(r) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& p : r.pieces) {
    CHECK(has_vertex(p, Point(0.5, 0.5)));
    CHECK(p.is_ccw());
  }
  CHECK(r.tip_ends == std::vector<int>{1});
}

TEST_CASE("kinked crack puts the kink on both pieces") {
  const Point kink(0.45, 0.55);
  const CrackPath c({Point(-0.5, 0.3), kink, Point(1.5, 0.2)}, {false, false});
  const auto r = clip_element(kUnit, c);
  REQUIRE(r.kind == CutKind::split);
  CHECK(piece_area_sum(r) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& p : r.pieces) CHECK(has_vertex(p, kink));
}

TEST_CASE("uncut element clips to itself") {
  const CrackPath c({Point(2, 2), Point(3, 3)}, {false, true});
  const auto r = clip_element(kUnit, c);
  CHECK(r.kind == CutKind::uncut);
  REQUIRE(r.pieces.size() == 1);
  REQUIRE(r.pieces[0].size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(r.pieces[0][k] == kUnit[k]);
}

TEST_CASE("random clips conserve area and stay simple") {
  SplitMix64 rng(5);
  const std::array<Point, 4> elem{Point(0.1, 0.0), Point(1.2, 0.1), Point(1.0, 0.9), Point(-0.1, 1.1)};
  const double area = signed_area(Polygon({elem.begin(), elem.end()}));
  int split = 0, tip = 0;
  for (int i = 0; i < 300; ++i) {
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    const Point start = Point(0.5, 0.5) + 2.0 * Point(std::cos(a), std::sin(a));
    const Point mid(0.2 + 0.6 * rng.uniform(), 0.2 + 0.6 * rng.uniform());
    const bool ends_inside = rng.uniform() < 0.5;
    const Point end = ends_inside ? mid : Point(0.5, 0.5) + 2.0 * (Point(0.5, 0.5) - start).normalized() +
                                              0.3 * Point(rng.uniform(), rng.uniform());
    std::vector<Point> v{start, mid};
    if (!ends_inside) v.push_back(end);
    const CrackPath c(v, {false, ends_inside});
    const auto r = clip_element(elem, c);
    if (r.kind == CutKind::uncut) continue;
    (r.kind == CutKind::tip ? tip : split)++;
    CHECK(rel_err(piece_area_sum(r), area) < 1e-10);
    for (const auto& p : r.pieces) {
      CHECK(p.is_ccw());
      CHECK(is_simple(p));
      if (r.kind == CutKind::tip) CHECK(has_vertex(p, c.end_point(1)));
    }
  }
  CHECK(split > 50);
  CHECK(tip > 50);
}

TEST_CASE("triangulations cover the polygon") {
  SplitMix64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const Polygon p = xfrac::testing::random_star(rng, 4 + i % 5);
    double s = 0.0;
    for (const auto& t : ear_clip(p)) s += 0.5 * cross(t[1] - t[0], t[2] - t[0]);
    CHECK(rel_err(s, signed_area(p)) < 1e-12);
  }
}

TEST_CASE("tip frame polar coordinates") {
  const CrackPath c({Point(0, 0), Point(1, 1)}, {false, true});
  const TipFrame f = c.tip_frame(1);
  CHECK(f.angle == doctest::Approx(std::numbers::pi / 4));
  const auto [r, theta] = f.polar(Point(1, 1) + Point(-1, 1) / std::sqrt(2.0));
  CHECK(r == doctest::Approx(1.0));
  CHECK(theta == doctest::Approx(std::numbers::pi / 2));
}
