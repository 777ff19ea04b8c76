#include <benchmark/benchmark.h>

#include "finsler/classifier.hpp"
#include "finsler/geodesic.hpp"

using namespace finsler;

namespace {

std::vector<Expr> identity3() {
  std::vector<Expr> a;
  for (int i = 0; i < 9; ++i) a.push_back(Expr::number(i % 4 == 0 ? 1.0 : 0.0));
  return a;
}

void BM_ClassifySphere(benchmark::State& state) {
  const Expr phi = parse("(x1^2 + x2^2 + x3^2)/2");
  const SpaceSpec spec = SpaceSpec::from_potential(3, 2, Family::GeneralizedSquare, identity3(), phi);
  const LevelSurface surface(phi, 0.5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(classify(spec, surface));
}
BENCHMARK(BM_ClassifySphere)->Unit(benchmark::kMillisecond);

void BM_GeodesicRanders(benchmark::State& state) {
  const SpaceSpec spec(3, 1, Family::Randers, identity3(), {parse("0.1"), parse("-0.2"), parse("0.15")});
  Vector p = Vector::Zero(3);
  Vector q(3);
  q << 1.0, 0.5, -0.25;
  GeodesicOptions o;
  o.segments = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_length(spec, p, q, o));
}
BENCHMARK(BM_GeodesicRanders)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
