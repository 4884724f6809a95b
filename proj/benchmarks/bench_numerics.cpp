#include <benchmark/benchmark.h>

#include <cmath>

#include "polysurf/measure.hpp"

using namespace polysurf;

static void RadialMoment(benchmark::State& state) {
  const auto model = MeasureModel::make("gaussian", static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_moment(model, model.n - 1));
  }
}
BENCHMARK(RadialMoment)->Arg(10)->Arg(100)->Arg(1000);

static void ParameterSolve(benchmark::State& state) {
  const auto model = MeasureModel::make("power:3", static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_params(model));
  }
}
BENCHMARK(ParameterSolve)->Arg(10)->Arg(100);

static void RadialTableBuild(benchmark::State& state) {
  const auto model = MeasureModel::make("gaussian", static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_radial_table(model));
  }
}
BENCHMARK(RadialTableBuild)->Arg(10)->Arg(100);

static void QuantileLookup(benchmark::State& state) {
  const auto model = MeasureModel::make("gaussian", 20);
  const auto table = build_radial_table(model);
  double u = 0.0;
  for (auto _ : state) {
    u += 0.618033988749;
    if (u >= 1.0) u -= 1.0;
    benchmark::DoNotOptimize(table.quantile(u));
  }
}
BENCHMARK(QuantileLookup);
