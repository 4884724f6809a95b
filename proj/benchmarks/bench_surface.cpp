#include <benchmark/benchmark.h>

#include "polysurf/extremal.hpp"
#include "polysurf/surface.hpp"

using namespace polysurf;

static void FacetSampler(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = MeasureModel::make("gaussian", n);
  const Polytope p = make_cube(n, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(surface_mc(model, p, 1000, 7));
  }
  state.SetItemsProcessed(state.iterations() * p.facet_count() * 1000);
}
BENCHMARK(FacetSampler)->Arg(3)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);

static void ShellSampler(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = MeasureModel::make("gaussian", n);
  const auto params = compute_params(model);
  const Polytope p = make_cube(n, 1.0);
  const double eps = default_shell_eps(params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        shell_oracle_mc(model, params, p, 2.0 * eps, eps, 20000, 7));
  }
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(ShellSampler)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

static void ProjectionDistance(benchmark::State& state) {
  const Polytope p = circumscribed_random(8, 32, 1.0, 5);
  std::vector<double> x(8, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance(p, x));
  }
}
BENCHMARK(ProjectionDistance);

static void ExpectedSurfaceQuadrature(benchmark::State& state) {
  const auto model = MeasureModel::make("gaussian", static_cast<int>(state.range(0)));
  const auto params = compute_params(model);
  const double rho = solve_rho(model, params, 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_surface_exact(model, params, 64, rho));
  }
  state.SetLabel("nested cap quadrature");
}
BENCHMARK(ExpectedSurfaceQuadrature)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
