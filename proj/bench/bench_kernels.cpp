// Serial versus OpenMP kernels on the trap-1 landscape.

#include <benchmark/benchmark.h>

#include "nanotrap/config.hpp"
#include "nanotrap/kernels.hpp"
#include "nanotrap/output.hpp"

using namespace nanotrap;

namespace {

const PotentialField& field() {
  static const PotentialField f = build_field(preset("he11-te01"));
  return f;
}

std::vector<Vec3> plane(int n) {
  GridSpec g;
  g.plane = Plane::z;
  g.offset = 2.3e-6;
  g.resolution_u = g.resolution_v = n;
  return grid_points(g);
}

std::vector<Vec3> fan(int n) {
  std::vector<Vec3> dirs;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n * 3.14159265358979;
    dirs.push_back({std::cos(t), std::sin(t), 0.3});
  }
  return dirs;
}

void grid_fill(benchmark::State& state, Execution exec) {
  const auto pts = plane(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_grid(field(), pts, GridQuantity::potential, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

void ray_fan(benchmark::State& state, Execution exec) {
  const Vec3 origin{0.0, 533.8e-9, 2306.6e-9};
  const auto dirs = fan(static_cast<int>(state.range(0)));
  RayOptions opt;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_rays(field(), origin, dirs, opt, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(dirs.size()));
}

void BM_GridSerial(benchmark::State& s) { grid_fill(s, Execution::serial); }
void BM_GridParallel(benchmark::State& s) { grid_fill(s, Execution::parallel); }
void BM_FanSerial(benchmark::State& s) { ray_fan(s, Execution::serial); }
void BM_FanParallel(benchmark::State& s) { ray_fan(s, Execution::parallel); }

}  // namespace

BENCHMARK(BM_GridSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FanSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FanParallel)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
