#include <benchmark/benchmark.h>

#include "xfrac/problems.hpp"
#include "xfrac/quadrature.hpp"
#include "xfrac/sccm.hpp"

namespace {

using xfrac::Point;
using xfrac::Polygon;

// the two pieces of a unit element with a tip at its centre
std::vector<Polygon> tip_pieces() {
  return {Polygon({Point(0.5, 0.5), Point(1.0, 0.5), Point(1.0, 1.0), Point(0.0, 1.0), Point(0.0, 0.5)}),
          Polygon({Point(0.5, 0.5), Point(0.0, 0.5), Point(0.0, 0.0), Point(1.0, 0.0), Point(1.0, 0.5)})};
}

const std::array<Point, 4> kUnit{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};

void BM_ParameterProblem(benchmark::State& state) {
  const auto pieces = tip_pieces();
  for (auto _ : state) benchmark::DoNotOptimize(xfrac::solve_parameter_problem(pieces.front()));
}
BENCHMARK(BM_ParameterProblem);

void BM_SccmTipRule(benchmark::State& state) {
  const auto pieces = tip_pieces();
  for (auto _ : state)
    benchmark::DoNotOptimize(xfrac::sccm_rule(kUnit, pieces, static_cast<int>(state.range(0)),
                                              xfrac::DiskRuleKind::midpoint, {}));
}
BENCHMARK(BM_SccmTipRule)->Arg(26)->Arg(78);

void BM_SubcellTipRule(benchmark::State& state) {
  const auto pieces = tip_pieces();
  for (auto _ : state) benchmark::DoNotOptimize(xfrac::subcell_rule(kUnit, pieces));
}
BENCHMARK(BM_SubcellTipRule);

void BM_GriffithSolve(benchmark::State& state) {
  const auto pc = xfrac::griffith_case(static_cast<int>(state.range(0)));
  xfrac::QuadratureOptions q;
  for (auto _ : state) {
    const auto s = xfrac::solve_case(pc, q);
    benchmark::DoNotOptimize(xfrac::case_sifs(s, pc, 2.0));
  }
}
BENCHMARK(BM_GriffithSolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
