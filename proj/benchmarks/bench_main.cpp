#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qtensor/experiments.hpp"

namespace {

using namespace qtensor;

StructuredMesh square_mesh(int nx) { return build_mesh(0.0, 2.0, 0.0, 2.0, nx, nx); }

void BM_AssembleOperators(benchmark::State& state) {
  const auto mesh = square_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(SpatialOperators::build(mesh));
  state.SetComplexityN(static_cast<int64_t>(mesh.num_nodes()));
}
BENCHMARK(BM_AssembleOperators)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_CgSolve(benchmark::State& state) {
  const auto ops = SpatialOperators::build(square_mesh(static_cast<int>(state.range(0))));
  StepOperator A(ops);
  A.set_coefficients({1000.0 + 0.025e6, 1e-3, 0.0, 1.0});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> p(ops.num_dofs()), b(ops.num_dofs());
  for (auto& v : p) v = 0.05 * u(rng);
  for (auto& v : b) v = u(rng);
  A.set_rank_one(p);
  CgResult info;
  for (auto _ : state) benchmark::DoNotOptimize(cg_solve(A, b, {}, &info));
  state.counters["iterations"] = info.iterations;
}
BENCHMARK(BM_CgSolve)->RangeMultiplier(2)->Range(16, 128);

void BM_TimeStep(benchmark::State& state) {
  const auto ops = SpatialOperators::build(square_mesh(static_cast<int>(state.range(0))));
  Params p;
  p.sigma = 0.025;
  const Stepper stepper(ops, p, 1e-3);
  const SimState start = stepper.initialize(initial_field(ops.mesh, InitialData::benchmark));
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(start));
}
BENCHMARK(BM_TimeStep)->RangeMultiplier(2)->Range(16, 128);

}  // namespace

BENCHMARK_MAIN();
