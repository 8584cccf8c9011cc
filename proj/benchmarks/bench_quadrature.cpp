#include <random>

#include <benchmark/benchmark.h>

#include <volflow/densities.hpp>
#include <volflow/logsumexp.hpp>
#include <volflow/quadrature.hpp>

using namespace volflow;

static void BM_LogSumExp(benchmark::State& state) {
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    std::mt19937 rng(3);
    std::normal_distribution<double> z(0.0, 30.0);
    for (auto& x : v) x = z(rng);
    for (auto _ : state) benchmark::DoNotOptimize(logsumexp(v));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogSumExp)->Range(1 << 8, 1 << 16);

static void BM_LogSumExpSymmetric(benchmark::State& state) {
    std::vector<double> v(static_cast<std::size_t>(state.range(0)) | 1u);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = static_cast<double>(i) - static_cast<double>(v.size() / 2);
        v[i] = -0.01 * x * x;
    }
    for (auto _ : state) benchmark::DoNotOptimize(logsumexp_symmetric(v));
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(v.size()));
}
BENCHMARK(BM_LogSumExpSymmetric)->Range(1 << 8, 1 << 16);

static void BM_Integral2D(benchmark::State& state) {
    const LogDensity f = make_density({"cross", {}}, make_grid(2, 6.0, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(log_integral(f));
}
BENCHMARK(BM_Integral2D)->Arg(129)->Arg(257)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
