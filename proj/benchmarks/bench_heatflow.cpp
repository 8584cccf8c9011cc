#include <benchmark/benchmark.h>

#include <volflow/densities.hpp>
#include <volflow/heatflow.hpp>

using namespace volflow;

static void BM_Evolve1D(benchmark::State& state) {
    const LogDensity f = make_density({"box", {}}, make_grid(1, 8.0, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(fp_evolve(f, 0.5));
}
BENCHMARK(BM_Evolve1D)->Arg(257)->Arg(513)->Arg(1025)->Unit(benchmark::kMicrosecond);

static void BM_Evolve2D(benchmark::State& state) {
    const LogDensity f = make_density({"cross", {}}, make_grid(2, 6.0, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(fp_evolve(f, 0.5));
}
BENCHMARK(BM_Evolve2D)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

// includes the kernel build, which the cache hides in BM_Evolve1D
static void BM_KernelBuild(benchmark::State& state) {
    const GridSpec g = make_grid(1, 8.0, 513);
    double t = 0.5;
    for (auto _ : state) {
        t += 1e-9;
        benchmark::DoNotOptimize(flow_kernel(FlowKernel::Kind::fokker_planck, t, g, 0));
    }
}
BENCHMARK(BM_KernelBuild)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
