#include <benchmark/benchmark.h>

#include <hdgdd/condensation.hpp>
#include <hdgdd/hdg_local.hpp>
#include <hdgdd/manufactured.hpp>
#include <hdgdd/projections.hpp>
#include <hdgdd/solver.hpp>

using namespace hdgdd;

namespace {

void BM_TransportBlocks(benchmark::State& state) {
  const Mesh mesh = build_structured_unit_square(4);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_transport_blocks(mesh, 5, k, nullptr, nullptr, 1.0));
  }
}
BENCHMARK(BM_TransportBlocks)->DenseRange(0, 2);

void BM_PoissonBlocks(benchmark::State& state) {
  const Mesh mesh = build_structured_unit_square(4);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_poisson_blocks(mesh, 5, k, {1.0, 1.0, 1.0}, 0.1));
  }
}
BENCHMARK(BM_PoissonBlocks)->DenseRange(0, 2);

void BM_Condense(benchmark::State& state) {
  const Mesh mesh = build_structured_unit_square(4);
  const LocalSystem local = local_poisson_blocks(mesh, 5, static_cast<int>(state.range(0)), {1.0, 1.0, 1.0}, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(condense(local, 5));
  }
}
BENCHMARK(BM_Condense)->DenseRange(0, 2);

void BM_PoissonSolve(benchmark::State& state) {
  const Mesh mesh = build_structured_unit_square(static_cast<int>(state.range(0)));
  const Problem ex = example1_problem(0.1);
  const SolverConfig cfg{0, 0.1, 1.0, 1};
  const CoefficientField u = l2_project_element(ScalarFunction([](double x, double y) { return Example1::u(x, y, 0.5); }), 1, mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_poisson(mesh, cfg, u, ex.f2, ex.bc, 0.5));
  }
  state.counters["elements"] = mesh.num_elements();
}
BENCHMARK(BM_PoissonSolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CachedPoissonSolve(benchmark::State& state) {
  const Mesh mesh = build_structured_unit_square(static_cast<int>(state.range(0)));
  const Problem ex = example1_problem(0.1);
  const PoissonSolver solver(mesh, SolverConfig{0, 0.1, 1.0, 1}, ex.bc, ex.f2);
  const CoefficientField u = l2_project_element(ScalarFunction([](double x, double y) { return Example1::u(x, y, 0.5); }), 1, mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.solve(u, 0.5));
  }
}
BENCHMARK(BM_CachedPoissonSolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
