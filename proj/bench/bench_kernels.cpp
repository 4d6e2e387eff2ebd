// Serial reference kernels against their OpenMP versions.
#include <benchmark/benchmark.h>

#include <string>

#include "navkit/coverage.hpp"
#include "navkit/sim.hpp"

using namespace navkit;

namespace {

std::string scen(const std::string& name) { return std::string(NAVKIT_SOURCE_DIR) + "/scenarios/" + name; }

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

const Terrain& occlusion_terrain() {
  static const Scenario sc = load_scenario(scen("terrain_occlusion.json"));
  return *sc.terrain;
}

void BM_GridCoverage(benchmark::State& state) {
  const Terrain& t = occlusion_terrain();
  const double alpha = kPi / 2.0;
  const WaypointSet ws = lattice_waypoints(t.region, 8.0, alpha, LatticePlacement{});
  std::vector<Point2> centers;
  for (const Point3& p : ws.points) centers.push_back(xy(p));
  for (auto _ : state)
    benchmark::DoNotOptimize(grid_coverage(t.region, centers, fov_radius(8.0, alpha), 0.05, exec_of(state)));
}

void BM_VisibilityCoverage(benchmark::State& state) {
  const Terrain& t = occlusion_terrain();
  const VantageResult vr = vantage_waypoints_3d(t, kPi / 2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(visibility_coverage(t, vr.set.points, kPi / 2.0, 0.25, exec_of(state)));
}

void BM_AltitudeSweep(benchmark::State& state) {
  const Terrain& t = occlusion_terrain();
  SweepConfig cfg;
  cfg.z_min = t.z_min;
  cfg.z_max = t.z_max;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(altitude_sweep(t.region, kPi / 2.0, cfg));
}

void BM_RunBatch(benchmark::State& state) {
  static const Scenario sc = load_scenario(scen("bench_static.json"));
  std::vector<BatchJob> jobs;
  for (std::uint64_t s = 0; s < 16; ++s) jobs.push_back({&sc, Policy::random_p(), s});
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(jobs, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_GridCoverage)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VisibilityCoverage)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AltitudeSweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunBatch)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
