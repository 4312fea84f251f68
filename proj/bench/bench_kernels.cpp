#include "afq/farey.hpp"
#include "afq/ideals.hpp"

#include <benchmark/benchmark.h>

// Serial reference kernels against their OpenMP counterparts.

static void BM_farey_row_serial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto lv = afq::farey_level_serial(n);
        benchmark::DoNotOptimize(lv.q.data());
    }
}
BENCHMARK(BM_farey_row_serial)->Arg(16)->Arg(18)->Arg(20)->Arg(22)->Unit(benchmark::kMillisecond);

static void BM_farey_row_parallel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto lv = afq::farey_level(n);
        benchmark::DoNotOptimize(lv.q.data());
    }
}
BENCHMARK(BM_farey_row_parallel)->Arg(16)->Arg(18)->Arg(20)->Arg(22)->Unit(benchmark::kMillisecond);

static void BM_determinant_sweep_serial(benchmark::State& state) {
    auto lv = afq::farey_level(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(afq::farey_row_determinants_ok_serial(lv));
}
BENCHMARK(BM_determinant_sweep_serial)->Arg(18)->Arg(20)->Arg(22)->Unit(benchmark::kMillisecond);

static void BM_determinant_sweep_parallel(benchmark::State& state) {
    auto lv = afq::farey_level(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(afq::farey_row_determinants_ok(lv));
}
BENCHMARK(BM_determinant_sweep_parallel)->Arg(18)->Arg(20)->Arg(22)->Unit(benchmark::kMillisecond);

static void BM_enumerate_serial(benchmark::State& state) {
    auto base = afq::farey_diagram(5);  // 17 vertices at the top level
    for (auto _ : state) {
        auto ideals = afq::enumerate_coherent_ideals_serial(base, 5);
        benchmark::DoNotOptimize(ideals.size());
    }
}
BENCHMARK(BM_enumerate_serial)->Unit(benchmark::kMillisecond);

static void BM_enumerate_parallel(benchmark::State& state) {
    auto base = afq::farey_diagram(5);
    for (auto _ : state) {
        auto ideals = afq::enumerate_coherent_ideals(base, 5);
        benchmark::DoNotOptimize(ideals.size());
    }
}
BENCHMARK(BM_enumerate_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
