// Serial reference vs OpenMP kernel for the two embarrassingly parallel
// workloads. Arg(0) of the parallel cases is the worker count.

#include <benchmark/benchmark.h>

#include "atomwalk/lyapunov.hpp"
#include "atomwalk/scattering.hpp"

namespace {

atomwalk::ScanSpec scan_spec() {
  atomwalk::ScanSpec s;
  s.lo = 0.1;
  s.hi = 0.2;
  s.n = 64;
  s.integrator.t_max = 5e3;
  return s;
}

atomwalk::FtleMapSettings map_settings() {
  atomwalk::FtleMapSettings s;
  s.delta_axis = {-0.6, 0.6, 4};
  s.kappa_axis = {-0.3, 0.65, 4};
  s.horizon = 1e3;
  return s;
}

void BM_ScanSerial(benchmark::State& state) {
  const auto spec = scan_spec();
  for (auto _ : state) benchmark::DoNotOptimize(atomwalk::scan_serial(spec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.n));
}

void BM_ScanParallel(benchmark::State& state) {
  const auto spec = scan_spec();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(atomwalk::scan(spec, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.n));
}

void BM_FtleMapSerial(benchmark::State& state) {
  const auto s = map_settings();
  for (auto _ : state) benchmark::DoNotOptimize(atomwalk::ftle_map_serial(s));
  state.SetItemsProcessed(state.iterations() * 16);
}

void BM_FtleMapParallel(benchmark::State& state) {
  const auto s = map_settings();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(atomwalk::ftle_map(s, workers));
  state.SetItemsProcessed(state.iterations() * 16);
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FtleMapSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FtleMapParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
