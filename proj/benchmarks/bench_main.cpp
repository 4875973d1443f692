#include <benchmark/benchmark.h>

#include "pindelay/charroots.hpp"
#include "pindelay/dde_sim.hpp"
#include "pindelay/delay_bounds.hpp"
#include "pindelay/graph.hpp"
#include "pindelay/spectral.hpp"

namespace {

using namespace pindelay;

PinningProblem ring_problem(int n) {
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, (i + 1) % n) = 0.5;
    w(i, (i + n - 1) % n) = 0.5;
  }
  return PinningProblem(laplacian(DirectedGraph(w)), PinSet::first(n / 4, n),
                        1.0, 0.1, 0.1, 0.0);
}

void BM_chi(benchmark::State& state) {
  const auto problem = ring_problem(static_cast<int>(state.range(0)));
  const QuasiPoly qp = QuasiPoly::from_problem(problem);
  Complex lambda(0.05, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi(qp, lambda));
    lambda += Complex(0.0, 1e-9);  // defeat value caching
  }
}
BENCHMARK(BM_chi)->Arg(8)->Arg(32)->Arg(64);

void BM_dominant_root(benchmark::State& state) {
  const auto problem = ring_problem(static_cast<int>(state.range(0)));
  const QuasiPoly qp = QuasiPoly::from_problem(problem);
  for (auto _ : state) benchmark::DoNotOptimize(dominant_root(qp));
}
BENCHMARK(BM_dominant_root)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_simulate(benchmark::State& state) {
  const auto problem = ring_problem(static_cast<int>(state.range(0)));
  const auto history = HistoryFunction::random_constant(problem.size(), 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate(problem, history, 10.0, 1e-2));
}
BENCHMARK(BM_simulate)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_min_F(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(min_F_over_omega(2.0, 4.0, 0.3));
}
BENCHMARK(BM_min_F)->Unit(benchmark::kMicrosecond);

void BM_tau_pM(benchmark::State& state) {
  const auto problem = ring_problem(static_cast<int>(state.range(0)));
  const SpectralDecomp decomp = eigendecompose(problem.system);
  for (auto _ : state)
    benchmark::DoNotOptimize(single_node_tau_pM(decomp, 1.0));
}
BENCHMARK(BM_tau_pM)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
