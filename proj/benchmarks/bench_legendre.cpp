#include <random>

#include <benchmark/benchmark.h>

#include <volflow/densities.hpp>
#include <volflow/legendre.hpp>

using namespace volflow;

static void BM_Legendre1D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridSpec g = make_grid(1, 8.0, n);
    const auto y = g.axis_coords(0);
    std::vector<double> phi(y.size());
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1e-3);
    for (std::size_t i = 0; i < y.size(); ++i) phi[i] = 0.5 * y[i] * y[i] + u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(legendre_1d(y, phi, y));
    state.SetComplexityN(n);
}
BENCHMARK(BM_Legendre1D)->Arg(257)->Arg(1025)->Arg(4097)->Arg(16385)->Complexity(benchmark::oN);

static void BM_Legendre2D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const LogDensity f = make_density({"cross", {}}, make_grid(2, 6.0, n));
    const DualGrid d = default_dual_grid(f);
    for (auto _ : state) benchmark::DoNotOptimize(legendre_transform(f, d));
}
BENCHMARK(BM_Legendre2D)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

static void BM_VolumeDualGrid(benchmark::State& state) {
    const LogDensity f = make_density({"exp_power", {{"alpha", 1.5}}}, make_grid(1, 8.0, 513));
    for (auto _ : state) benchmark::DoNotOptimize(fitted_dual_grid(f));
}
BENCHMARK(BM_VolumeDualGrid);

BENCHMARK_MAIN();
