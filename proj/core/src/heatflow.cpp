#include "volflow/heatflow.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "volflow/quadrature.hpp"

namespace volflow {

namespace {

using Key = std::tuple<int, double, int, double>;

std::mutex g_cache_mutex;
std::map<Key, std::shared_ptr<const FlowKernel>> g_cache;
constexpr std::size_t kCacheLimit = 64;

std::shared_ptr<const FlowKernel> build_kernel(FlowKernel::Kind kind, double t, const GridSpec& grid, int axis) {
    auto k = std::make_shared<FlowKernel>();
    k->kind = kind;
    k->t = t;
    k->out_points = k->in_points = grid.points(axis);
    k->spacing = grid.spacing(axis);
    const double var = -std::expm1(-2.0 * t);
    const double decay = std::exp(-t);
    const double norm = -0.5 * std::log(2.0 * std::numbers::pi * var);
    const auto lw = trapezoid_log_weights(grid, axis);
    const auto c = grid.axis_coords(axis);
    const int n = k->in_points;
    k->log_w.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double d = kind == FlowKernel::Kind::fokker_planck ? c[static_cast<std::size_t>(j)] - decay * c[static_cast<std::size_t>(i)]
                                                                     : decay * c[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(i)];
            k->log_w[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
                -0.5 * d * d / var + norm + lw[static_cast<std::size_t>(i)];
        }
    }
    return k;
}

}  // namespace

std::shared_ptr<const FlowKernel> flow_kernel(FlowKernel::Kind kind, double t, const GridSpec& grid, int axis) {
    if (!(t > 0.0)) throw std::invalid_argument("flow kernel needs t > 0");
    const double sd = std::sqrt(-std::expm1(-2.0 * t));
    if (sd < grid.spacing(axis)) {
        std::ostringstream os;
        os << "kernel under-resolved: std " << sd << " below grid spacing " << grid.spacing(axis) << " at t=" << t;
        throw UnderResolvedKernel(os.str());
    }
    const Key key{static_cast<int>(kind), t, grid.points(axis), grid.spacing(axis)};
    {
        std::lock_guard lock(g_cache_mutex);
        if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;
    }
    auto k = build_kernel(kind, t, grid, axis);
    std::lock_guard lock(g_cache_mutex);
    if (g_cache.size() >= kCacheLimit) g_cache.clear();
    g_cache.emplace(key, k);
    return k;
}

namespace {

LogDensity apply_kernel(const LogDensity& f, double t, FlowKernel::Kind kind) {
    const GridSpec& g = f.grid();
    std::vector<std::shared_ptr<const FlowKernel>> held;
    std::vector<const AxisKernel*> ks;
    for (int k = 0; k < g.dim(); ++k) {
        held.push_back(flow_kernel(kind, t, g, k));
        ks.push_back(held.back().get());
    }
    std::vector<double> lv(f.size());
    for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = -f.phi(i);
    auto out = contract_axes(g, g, std::move(lv), ks);
    for (double& v : out) v = -v;
    return LogDensity(g, std::move(out), f.even());
}

}  // namespace

LogDensity fp_evolve(const LogDensity& f0, double t) {
    if (t < 0.0 || std::isnan(t)) throw std::invalid_argument("fp_evolve: t must be nonnegative");
    if (t == 0.0) return f0;
    return apply_kernel(f0, t, FlowKernel::Kind::fokker_planck);
}

LogDensity ou_apply(const LogDensity& g, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("ou_apply: s must be positive");
    return apply_kernel(g, s, FlowKernel::Kind::ornstein_uhlenbeck);
}

std::vector<LogDensity> flow_trajectory(const LogDensity& f0, const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) throw std::invalid_argument("flow_trajectory: times must be positive");
        if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("flow_trajectory: times must increase");
    }
    std::vector<LogDensity> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(fp_evolve(f0, t));
    return out;
}

}  // namespace volflow
