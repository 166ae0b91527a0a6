// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include <eigencert/cluster_bounds.hpp>
#include <eigencert/validation.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace eigencert;

void BM_AssembleSquare(benchmark::State& state) {
  const Mesh mesh = build_unit_square_mesh(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_AssembleSquare)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_DenseSolve(benchmark::State& state) {
  const Discretization d = assemble(build_unit_square_mesh(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_dense(d.stiffness, d.mass, 8));
}
BENCHMARK(BM_DenseSolve)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_IterativeSolve(benchmark::State& state) {
  const Discretization d = assemble(build_lshape_mesh(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_iterative(d.stiffness, d.mass, 6));
}
BENCHMARK(BM_IterativeSolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CrossGram(benchmark::State& state) {
  const Mesh mesh = build_unit_square_mesh(static_cast<std::size_t>(state.range(0)));
  const Discretization d = assemble(mesh);
  const EigenSolution s = solve_iterative(d.stiffness, d.mass, 3);
  const auto modes = square_cluster_modes({2, 3});
  const QuadratureRule rule = triangle_rule(min_validation_degree);
  for (auto _ : state)
    benchmark::DoNotOptimize(cross_gram(modes, s.basis(2, 3), mesh, d.dofs, rule, InnerProduct::energy));
}
BENCHMARK(BM_CrossGram)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ClusterReports(benchmark::State& state) {
  const Mesh mesh = build_unit_square_mesh(static_cast<std::size_t>(state.range(0)));
  const Discretization d = assemble(mesh);
  const EigenSolution s = solve_iterative(d.stiffness, d.mass, 8);
  const EnclosureTable enc = lower_bounds_from_ch(s, ch_convex(mesh.h_leg()));
  const std::vector<ClusterSpec> clusters{{1, 1}, {2, 3}};
  for (auto _ : state)
    benchmark::DoNotOptimize(build_cluster_reports(clusters, enc, s, d.stiffness, d.mass, ch_convex(mesh.h_leg())));
}
BENCHMARK(BM_ClusterReports)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
