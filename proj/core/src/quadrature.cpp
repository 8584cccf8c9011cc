#include "volflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include "volflow/diagnostics.hpp"

namespace volflow {

std::vector<double> trapezoid_log_weights(const GridSpec& grid, int axis) {
    const int n = grid.points(axis);
    const double lh = std::log(grid.spacing(axis));
    std::vector<double> w(static_cast<std::size_t>(n), lh);
    w.front() = w.back() = lh - std::numbers::ln2;
    return w;
}

LogQuad log_trapezoid(const GridSpec& grid, std::span<const double> log_integrand,
                      std::span<const unsigned char> excluded) {
    const std::size_t total = grid.total();
    if (log_integrand.size() != total) throw std::invalid_argument("log_trapezoid: size mismatch");
    const bool use_mask = !excluded.empty();
    const int n = grid.dim();

    std::vector<std::vector<double>> lw(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) lw[static_cast<std::size_t>(k)] = trapezoid_log_weights(grid, k);

    auto is_out = [&](std::size_t i) { return use_mask && excluded[i] != 0; };
    auto next_to_excluded = [&](std::size_t i) {
        if (!use_mask) return false;
        const auto idx = grid.unravel(i);
        for (int k = 0; k < n; ++k) {
            const std::size_t st = grid.stride(k);
            if (idx[k] > 0 && excluded[i - st]) return true;
            if (idx[k] + 1 < grid.points(k) && excluded[i + st]) return true;
        }
        return false;
    };

    double m = -kInf, edge_max = -kInf, inner_max = -kInf;
    for (std::size_t i = 0; i < total; ++i) {
        if (is_out(i)) continue;
        const double v = log_integrand[i];
        if (v == -kInf) continue;
        if (std::isnan(v) || v == kInf) throw std::invalid_argument("log_trapezoid: non-finite integrand");
        if (grid.on_boundary(i) || next_to_excluded(i))
            edge_max = std::max(edge_max, v);
        else
            inner_max = std::max(inner_max, v);
        m = std::max(m, v);
    }
    if (m == -kInf) return LogQuad{};

    double s = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        if (is_out(i)) continue;
        const double v = log_integrand[i];
        if (v == -kInf) continue;
        const auto idx = grid.unravel(i);
        double w = 0.0;
        for (int k = 0; k < n; ++k) w += lw[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[k])];
        s += std::exp(v - m + w);
    }
    double tail = 0.0;
    if (edge_max > -kInf) tail = inner_max == -kInf ? kInf : std::exp(edge_max - inner_max);
    if (tail > kTailWarn) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "truncation: tail_ratio %.3g", tail);
        record_warning(buf);
    }
    return LogQuad::from_log(m + std::log(s), tail);
}

namespace {

std::vector<double> measure_log_density(const GridSpec& grid, Measure m) {
    std::vector<double> out(grid.total(), 0.0);
    if (m == Measure::lebesgue) return out;
    const int n = grid.dim();
    const double c = -0.5 * n * std::log(2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto x = grid.node(i);
        double r2 = 0.0;
        for (int k = 0; k < n; ++k) r2 += x[k] * x[k];
        out[i] = c - 0.5 * r2;
    }
    return out;
}

}  // namespace

LogQuad log_integral(const LogDensity& f, Measure m) {
    auto integrand = measure_log_density(f.grid(), m);
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] -= f.phi(i);
    for (auto& v : integrand)
        if (std::isnan(v)) v = -kInf;
    return log_trapezoid(f.grid(), integrand);
}

LogQuad log_lq_norm_of_log(const GridSpec& grid, std::span<const double> log_f, double q, Measure m) {
    if (q == 0.0 || !std::isfinite(q)) throw std::invalid_argument("log_lq_norm: q must be finite and nonzero");
    if (log_f.size() != grid.total()) throw std::invalid_argument("log_lq_norm: size mismatch");
    auto integrand = measure_log_density(grid, m);
    std::vector<unsigned char> excluded;
    if (q < 0.0) excluded.assign(integrand.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        const double lf = log_f[i];
        if (lf == -kInf) {
            if (q > 0.0)
                integrand[i] = -kInf;
            else
                excluded[i] = 1;
            continue;
        }
        if (lf == kInf) {
            // f = inf: contributes inf for q > 0, zero for q < 0
            if (q > 0.0) return LogQuad::diverged();
            integrand[i] = -kInf;
            continue;
        }
        integrand[i] += q * lf;
        any = true;
    }
    if (!any) return LogQuad{};
    LogQuad r = log_trapezoid(grid, integrand, excluded);
    if (r.sign == 0) return r;
    r.log_abs /= q;
    return r;
}

LogQuad log_lq_norm(const LogDensity& f, double q, Measure m) {
    std::vector<double> log_f(f.size());
    for (std::size_t i = 0; i < log_f.size(); ++i) log_f[i] = -f.phi(i);
    return log_lq_norm_of_log(f.grid(), log_f, q, m);
}

}  // namespace volflow
