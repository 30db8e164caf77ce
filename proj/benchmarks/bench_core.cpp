#include <benchmark/benchmark.h>

#include <cmath>

#include "gkdv/adiabatic.hpp"
#include "gkdv/linops.hpp"
#include "gkdv/pde.hpp"
#include "gkdv/scaling_laws.hpp"
#include "gkdv/soliton.hpp"

using namespace gkdv;

static void BM_pde_step(benchmark::State& state) {
  SolverConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.half_length = cfg.n / 16.0;
  GkdvSolver solver(cfg, 3, 0.45, Medium::ramp(PotentialSpec(1.0), 0.05));
  solver.set_initial([&](double x) { return soliton_qc(3, 1.0, x + cfg.half_length / 3); });
  for (auto _ : state) {
    solver.step();
    benchmark::DoNotOptimize(solver.field().data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.n);
}
BENCHMARK(BM_pde_step)->Arg(1024)->Arg(4096)->Arg(8192);

static void BM_pde_monitors(benchmark::State& state) {
  SolverConfig cfg;
  cfg.n = 4096;
  cfg.half_length = 250.0;
  GkdvSolver solver(cfg, 3, 0.45, Medium::ramp(PotentialSpec(1.0), 0.05));
  solver.set_initial([](double x) { return soliton_qc(3, 1.0, x + 60.0); });
  for (auto _ : state) {
    auto m = solver.monitors();
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_pde_monitors);

static void BM_ode_integrate(benchmark::State& state) {
  const ModelParams params(3, 0.6, 0.05);
  for (auto _ : state) {
    auto run = integrate_adiabatic(params);
    benchmark::DoNotOptimize(run.c_escape);
  }
}
BENCHMARK(BM_ode_integrate);

static void BM_c_infinity(benchmark::State& state) {
  double lambda = 0.34;
  for (auto _ : state) {
    auto pred = c_infinity(3, lambda);
    benchmark::DoNotOptimize(pred.c_inf);
    lambda += 1e-6;
    if (lambda > 0.99) lambda = 0.05;
  }
}
BENCHMARK(BM_c_infinity);

static void BM_apply_operator(benchmark::State& state) {
  const Grid grid(40.96, static_cast<int>(state.range(0)));
  LinearizedOperator op(3, 1.0, grid);
  std::vector<double> w(grid.n);
  for (int j = 0; j < grid.n; ++j) w[j] = lambda_qc(3, 1.0, grid.node(j));
  for (auto _ : state) {
    auto lw = op.apply(w);
    benchmark::DoNotOptimize(lw.data());
  }
}
BENCHMARK(BM_apply_operator)->Arg(4096)->Arg(8192);

BENCHMARK_MAIN();
