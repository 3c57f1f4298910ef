#include <benchmark/benchmark.h>

#include "rwl1/reweight.hpp"
#include "rwl1/sensing.hpp"
#include "rwl1/signalgen.hpp"
#include "rwl1/theory.hpp"
#include "rwl1/wbpdn.hpp"

namespace {

using namespace rwl1;

struct Fixture {
  SensingMatrix A;
  Vector x;
  MeasurementSet m;
};

Fixture make(std::size_t n, std::size_t N, std::size_t k) {
  auto A = gen_gaussian(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(N), 1);
  SignalSpec s;
  s.N = N;
  s.k = k;
  s.seed = 2;
  Vector x = gen_sparse(s);
  auto m = measure(A, x, 0.0, 0);
  return {std::move(A), std::move(x), std::move(m)};
}

void BM_SolveUnitWeights(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto f = make(N / 4, N, N / 40);
  const auto w = WeightVector::ones(static_cast<Eigen::Index>(N));
  for (auto _ : state) benchmark::DoNotOptimize(solve(f.A, f.m, w).objective);
}
BENCHMARK(BM_SolveUnitWeights)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_Driver(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  const auto f = make(100, 400, 30);
  for (auto _ : state) benchmark::DoNotOptimize(run(method, f.A, f.m).solution.data());
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_Driver)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_TopSupport(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  SignalSpec s;
  s.kind = SignalKind::kCompressible;
  s.N = N;
  s.seed = 3;
  const Vector x = gen_compressible(s);
  for (auto _ : state) benchmark::DoNotOptimize(top_support(x, N / 10));
}
BENCHMARK(BM_TopSupport)->Arg(2000)->Arg(20000);

void BM_BruteForceRip(benchmark::State& state) {
  const auto A = gen_gaussian(10, 20, 4);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(theory::brute_force_rip(A, k).delta);
}
BENCHMARK(BM_BruteForceRip)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
