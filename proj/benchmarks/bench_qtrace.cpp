#include <benchmark/benchmark.h>

#include <random>

#include "qtrace/positivity.hpp"

namespace {

using namespace qtrace;

LaurentPoly flagship_P() { return LaurentPoly(std::map<int, cplx>{{-1, 1.0}, {0, -(1.2 + 1.0 / 1.2)}, {1, 1.0}}); }

ClassifyOptions flagship() {
  ClassifyOptions o;
  o.q = 0.5;
  o.P = flagship_P();
  o.k = 1;
  return o;
}

void BM_ThetaHat(benchmark::State& state) {
  const auto params = ThetaParams::make(0.5);
  cplx z = std::polar(1.3, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(theta_hat(z, params));
    z *= std::polar(1.0, 1e-3);
  }
}
BENCHMARK(BM_ThetaHat);

// Moments by sampling w on the circle; cost is dominated by the theta evaluations.
void BM_Moments(benchmark::State& state) {
  const TraceConstruction tc = construct_trace(flagship());
  const int W = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(moments(tc.paired->ansatz, W));
}
BENCHMARK(BM_Moments)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_AlgebraMultiply(benchmark::State& state) {
  const AlgebraParams params = AlgebraParams::from_conjugation(0.5, flagship_P(), 1);
  std::mt19937_64 rng(1);
  const int deg = static_cast<int>(state.range(0));
  const AlgebraElement a = random_element(rng, deg, deg);
  const AlgebraElement b = random_element(rng, deg, deg);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b, params));
}
BENCHMARK(BM_AlgebraMultiply)->Arg(2)->Arg(4)->Arg(8);

void BM_LinearSystem(benchmark::State& state) {
  const TraceConstruction tc = construct_trace(flagship());
  const int W = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(moments_by_linear_system(tc.params, W));
}
BENCHMARK(BM_LinearSystem)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const ClassifyOptions o = flagship();
  for (auto _ : state) benchmark::DoNotOptimize(classify(o));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
