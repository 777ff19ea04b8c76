#include <benchmark/benchmark.h>

#include "finsler/connection.hpp"
#include "finsler/tensors.hpp"

using namespace finsler;

namespace {

SpaceSpec curved_space(int k) {
  std::vector<Expr> a;
  for (const char* e : {"1 + 0.2*x2^2", "0.1*x1*x3", "0", "0.1*x1*x3", "1.5 + 0.1*sin(x1)", "0.05*x2", "0", "0.05*x2",
                        "1 + 0.1*x1^2"}) {
    a.push_back(parse(e));
  }
  std::vector<Expr> b;
  for (const char* e : {"0.1*x2 + 0.05", "0.2*x3*x1 - 0.1", "0.15 + 0.1*x1^2"}) b.push_back(parse(e));
  return SpaceSpec(3, k, Family::GeneralizedSquare, std::move(a), std::move(b));
}

void BM_ComputeBundle(benchmark::State& state) {
  const SpaceSpec spec = curved_space(static_cast<int>(state.range(0)));
  const std::vector<FlagPoint> flags = sample_flags(spec, 64, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(compute_bundle(spec, flags[i++ % flags.size()]));
}
BENCHMARK(BM_ComputeBundle)->Arg(1)->Arg(3);

void BM_DualOracleMetric(benchmark::State& state) {
  const SpaceSpec spec = curved_space(2);
  const std::vector<FlagPoint> flags = sample_flags(spec, 64, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    const FlagPoint& f = flags[i++ % flags.size()];
    auto norm_sq = [&](auto y) {
      auto v = finsler_norm(spec.family(), spec.exponent(), f.a, f.b, y);
      return v * v;
    };
    benchmark::DoNotOptimize(jet_eval(norm_sq, f.y));
  }
}
BENCHMARK(BM_DualOracleMetric);

void BM_Audit(benchmark::State& state) {
  const SpaceSpec spec = curved_space(2);
  const std::vector<FlagPoint> flags = sample_flags(spec, 16, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(audit(spec, flags[i++ % flags.size()]));
}
BENCHMARK(BM_Audit);

void BM_DifferenceTensor(benchmark::State& state) {
  const SpaceSpec spec = curved_space(2);
  const std::vector<FlagPoint> flags = sample_flags(spec, 64, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(difference_tensor(spec, flags[i++ % flags.size()]));
}
BENCHMARK(BM_DifferenceTensor);

}  // namespace
