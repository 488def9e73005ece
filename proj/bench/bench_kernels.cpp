// SPDX-License-Identifier: Apache-2.0
// Serial reference kernels against their OpenMP counterparts.
#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "plap/kernels.hpp"
#include "plap/quotient.hpp"
#include "plap/shapes.hpp"

using namespace plap;

namespace {

const MeshPair& ball(int refine) {
  static std::map<int, MeshPair> cache;
  auto it = cache.find(refine);
  if (it == cache.end()) it = cache.emplace(refine, generate(ShapeSpec::sphere(3, 1.0, refine))).first;
  return it->second;
}

std::vector<double> field(std::size_t n) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<double> u(n);
  for (double& x : u) x = d(rng);
  return u;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? Exec::parallel : Exec::serial;
}

void BM_Energy(benchmark::State& state) {
  const VolumeMesh& v = ball(static_cast<int>(state.range(0))).volume;
  const auto u = field(v.num_vertices());
  for (auto _ : state) {
    benchmark::DoNotOptimize(p_energy(v.elements(), u, 3.0, 0.0, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(v.num_cells()));
}

void BM_EnergyGradient(benchmark::State& state) {
  const VolumeMesh& v = ball(static_cast<int>(state.range(0))).volume;
  const auto u = field(v.num_vertices());
  std::vector<double> g(u.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        p_energy_gradient(v.elements(), v.incidence(), u, 1.5, 1e-4, g, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(v.num_cells()));
}

void BM_QuotientGradient(benchmark::State& state) {
  const VolumeMesh& v = ball(static_cast<int>(state.range(0))).volume;
  const QuotientProblem prob = steklov_problem(v);
  const auto u = field(v.num_vertices());
  std::vector<double> g(u.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(quotient_gradient(prob, u, 3.0, 0.0, g, exec_of(state)));
  }
}

}  // namespace

// Arguments: refinement level, then 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_Energy)->ArgsProduct({{3, 4, 5}, {0, 1}});
BENCHMARK(BM_EnergyGradient)->ArgsProduct({{3, 4, 5}, {0, 1}});
BENCHMARK(BM_QuotientGradient)->ArgsProduct({{3, 4, 5}, {0, 1}});

BENCHMARK_MAIN();
