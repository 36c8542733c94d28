// Serial reference path against the OpenMP path for the batch kernels.
// The second argument of every benchmark selects the path: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "flatmink/classify.hpp"
#include "flatmink/incidence.hpp"
#include "flatmink/rootcraft.hpp"

using namespace flatmink;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

PlaneSpec mixed() {
  return normalise(PlaneSpec(catalog("reciprocal_x_plus_arctan"), catalog("arcsinh_reciprocal"),
                             catalog("reciprocal_power_sum", {{"n", 3}}), catalog("reciprocal_power", {{"i", 1}})));
}

void BM_VerifyCaseTable(benchmark::State& state) {
  const PlaneSpec p = mixed();
  ScanOptions scan;
  scan.points = 4096;
  for (auto _ : state) {
    const auto r = verify_case_table(p.f1(), p.f2(), static_cast<std::size_t>(state.range(0)), 7, exec_of(state), scan);
    benchmark::DoNotOptimize(r.violations.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FuzzAxioms(benchmark::State& state) {
  const PlaneSpec p = mixed();
  FuzzOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) {
    const auto r = fuzz_axioms(p, static_cast<std::size_t>(state.range(0)), 7, opts);
    benchmark::DoNotOptimize(r.checks);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Isomorphic(benchmark::State& state) {
  const PlaneSpec f = mixed();
  const PlaneSpec g = normalise(rescale_plane(f, 2.0));
  IsoOptions opts;
  opts.exec = exec_of(state);
  opts.max_exponent = static_cast<int>(state.range(0));
  opts.min_exponent = -opts.max_exponent;
  for (auto _ : state) {
    const auto w = isomorphic(f, g, opts);
    benchmark::DoNotOptimize(w.has_value());
  }
}

}  // namespace

BENCHMARK(BM_VerifyCaseTable)->ArgsProduct({{256}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FuzzAxioms)->ArgsProduct({{512}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Isomorphic)->ArgsProduct({{40}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
