#include "volflow/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "volflow/diagnostics.hpp"

namespace volflow {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int odd_at_least(double v) {
    int n = static_cast<int>(std::ceil(v));
    if (n < 3) n = 3;
    if (n % 2 == 0) ++n;
    return n;
}

int default_cap(int dim) { return dim == 1 ? 16385 : dim == 2 ? 1025 : 129; }

}  // namespace

double slope_bound(const LogDensity& f, int axis) {
    const GridSpec& g = f.grid();
    const std::size_t st = g.stride(axis);
    const double h = g.spacing(axis);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = g.unravel(i);
        if (idx[axis] + 1 >= g.points(axis)) continue;
        const double a = f.phi(i), b = f.phi(i + st);
        const bool fa = std::isfinite(a), fb = std::isfinite(b);
        if (fa && fb)
            s = std::max(s, std::fabs(b - a) / h);
        else if (fa != fb)
            return kInf;
    }
    return s;
}

DualGrid fitted_dual_grid(const LogDensity& f, double decay, int max_points) {
    const GridSpec& g = f.grid();
    const int n = g.dim();
    const int cap = max_points > 0 ? max_points : default_cap(n);
    double phi_min = kInf;
    for (double v : f.phi()) phi_min = std::min(phi_min, v);

    std::array<double, kMaxDim> spacing{};
    std::array<int, kMaxDim> points{};
    for (int k = 0; k < n; ++k) {
        const double h = g.spacing(k);
        const double slope = slope_bound(f, k);
        // along the axis phi*(t e_k) >= t y_k - phi(y) for every finite node y
        double reach = kInf;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double v = f.phi(i);
            if (!std::isfinite(v)) continue;
            const double yk = g.node(i)[k];
            if (yk <= 0.0) continue;
            reach = std::min(reach, (decay + v - phi_min) / yk);
        }
        // the sublevel set of phi* can reach further off the axes
        reach *= 1.0 + 0.5 * (n - 1);
        double width = std::min(slope, reach);
        if (!std::isfinite(width) || width <= 0.0) width = g.half_width(k);
        // the primal spacing (or a whole multiple of it once the cap binds)
        // keeps dual nodes aligned with primal ones
        const int top = (cap % 2 == 1 ? cap : cap - 1) / 2;
        const double steps = std::ceil(width / h * (1.0 - 4.0 * kEps));
        const double stride = std::ceil(steps / top);
        const int half = std::max(1, static_cast<int>(std::ceil(steps / stride)));
        points[k] = 2 * half + 1;
        spacing[k] = stride * h;
    }
    return {make_grid_with_spacing(std::span<const double>(spacing.data(), static_cast<std::size_t>(n)),
                                   std::span<const int>(points.data(), static_cast<std::size_t>(n)))};
}

DualGrid default_dual_grid(const LogDensity& f) {
    const GridSpec& g = f.grid();
    const int n = g.dim();
    std::array<double, kMaxDim> hw{};
    std::array<int, kMaxDim> np{};
    for (int k = 0; k < n; ++k) {
        const double s = slope_bound(f, k);
        if (!std::isfinite(s)) return fitted_dual_grid(f);
        const int m = g.points(k);
        // one dual spacing beyond the slope range: R = s + 2R/(m-1)
        hw[k] = std::max(s, g.spacing(k)) * (m - 1) / (m - 3 > 0 ? m - 3 : 1);
        np[k] = m;
    }
    return {make_grid(std::span<const double>(hw.data(), static_cast<std::size_t>(n)),
                      std::span<const int>(np.data(), static_cast<std::size_t>(n)))};
}

std::vector<double> legendre_1d(std::span<const double> y, std::span<const double> phi,
                                std::span<const double> x) {
    if (y.size() != phi.size()) throw std::invalid_argument("legendre_1d: y and phi differ in length");
    std::vector<std::size_t> fin;
    fin.reserve(phi.size());
    double max_y = 0.0, max_phi = 0.0, max_x = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (std::isnan(phi[i])) throw std::invalid_argument("legendre_1d: NaN input");
        if (std::isfinite(phi[i])) {
            fin.push_back(i);
            max_y = std::max(max_y, std::fabs(y[i]));
            max_phi = std::max(max_phi, std::fabs(phi[i]));
        } else if (phi[i] < 0) {
            throw std::invalid_argument("legendre_1d: -inf input");
        }
    }
    if (fin.empty()) throw std::invalid_argument("legendre_1d: every entry is +inf");
    for (double v : x) max_x = std::max(max_x, std::fabs(v));

    // Window sizes are generous multiples of the rounding error of x*y - phi.
    const double scale = max_x * max_y + max_phi + std::numeric_limits<double>::min();
    const double tol_gap = 64.0 * kEps * scale;
    const double tol_w = 256.0 * kEps * scale;

    // lower hull, monotone chain
    std::vector<std::size_t> hull;
    hull.reserve(fin.size());
    for (std::size_t i : fin) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull.back();
            const double cr = (y[b] - y[a]) * (phi[i] - phi[a]) - (phi[b] - phi[a]) * (y[i] - y[a]);
            if (cr > 0.0) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }

    // points that sit within rounding distance of the hull can still win the
    // floating-point max, so they stay in play
    std::vector<std::size_t> cand;
    cand.reserve(fin.size());
    {
        std::size_t hk = 0;
        for (std::size_t i : fin) {
            while (hk + 1 < hull.size() && hull[hk + 1] <= i) ++hk;
            if (hull[hk] == i) {
                cand.push_back(i);
                continue;
            }
            const std::size_t a = hull[hk], b = hull[hk + 1];
            const double lin = phi[a] + (phi[b] - phi[a]) * ((y[i] - y[a]) / (y[b] - y[a]));
            if (phi[i] - lin <= tol_gap) cand.push_back(i);
        }
    }

    std::vector<double> out(x.size());
    const std::size_t hn = hull.size();
    std::size_t j = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double xv = x[k];
        auto val = [&](std::size_t i) { return xv * y[i] - phi[i]; };
        while (j + 1 < hn && val(hull[j + 1]) >= val(hull[j])) ++j;
        double best = val(hull[j]);
        std::size_t jl = j, jr = j;
        while (jl > 0) {
            const double v = val(hull[jl - 1]);
            if (v < best - tol_w) break;
            best = std::max(best, v);
            --jl;
        }
        while (jr + 1 < hn) {
            const double v = val(hull[jr + 1]);
            if (v < best - tol_w) break;
            best = std::max(best, v);
            ++jr;
        }
        const std::size_t lo = hull[jl > 0 ? jl - 1 : 0];
        const std::size_t hi = hull[jr + 1 < hn ? jr + 1 : hn - 1];
        auto it = std::lower_bound(cand.begin(), cand.end(), lo);
        for (; it != cand.end() && *it <= hi; ++it) best = std::max(best, val(*it));
        out[k] = best;
    }
    return out;
}

LogDensity legendre_transform(const LogDensity& f, const DualGrid& dual) {
    const GridSpec& pg = f.grid();
    const GridSpec& dg = dual.grid;
    const int n = pg.dim();
    if (dg.dim() != n) throw std::invalid_argument("legendre_transform: dual grid dimension mismatch");

    // theta holds -A after each pass, where A is the partial conjugate
    std::array<int, kMaxDim> shape{1, 1, 1};
    for (int k = 0; k < n; ++k) shape[k] = pg.points(k);
    std::vector<double> theta(f.phi().begin(), f.phi().end());
    std::vector<double> a;

    for (int axis = 0; axis < n; ++axis) {
        const auto y = pg.axis_coords(axis);
        const auto x = dg.axis_coords(axis);
        std::array<int, kMaxDim> out_shape = shape;
        out_shape[axis] = dg.points(axis);

        auto strides = [n](const std::array<int, kMaxDim>& s) {
            std::array<std::size_t, kMaxDim> st{1, 1, 1};
            for (int k = n - 2; k >= 0; --k) st[k] = st[k + 1] * static_cast<std::size_t>(s[k + 1]);
            return st;
        };
        const auto in_st = strides(shape);
        const auto out_st = strides(out_shape);
        std::size_t out_total = 1;
        for (int k = 0; k < n; ++k) out_total *= static_cast<std::size_t>(out_shape[k]);
        a.assign(out_total, 0.0);

        // iterate over every line along `axis`
        std::size_t lines = 1;
        for (int k = 0; k < n; ++k)
            if (k != axis) lines *= static_cast<std::size_t>(shape[k]);
        std::vector<double> line(static_cast<std::size_t>(shape[axis]));
        for (std::size_t l = 0; l < lines; ++l) {
            std::size_t rem = l, in_base = 0, out_base = 0;
            for (int k = n - 1; k >= 0; --k) {
                if (k == axis) continue;
                const auto sk = static_cast<std::size_t>(shape[k]);
                const std::size_t ik = rem % sk;
                rem /= sk;
                in_base += ik * in_st[k];
                out_base += ik * out_st[k];
            }
            bool any = false;
            for (std::size_t i = 0; i < line.size(); ++i) {
                line[i] = theta[in_base + i * in_st[axis]];
                any = any || std::isfinite(line[i]);
            }
            if (!any) {
                for (int j = 0; j < out_shape[axis]; ++j) a[out_base + static_cast<std::size_t>(j) * out_st[axis]] = -kInf;
                continue;
            }
            const auto conj = legendre_1d(y, line, x);
            for (std::size_t j = 0; j < conj.size(); ++j) a[out_base + j * out_st[axis]] = conj[j];
        }
        shape = out_shape;
        if (axis + 1 < n) {
            theta.resize(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) theta[i] = -a[i];
        }
    }
    return LogDensity(dg, std::move(a), f.even());
}

LogDensity polar_density(const LogDensity& f, const DualGrid& dual) {
    if (!f.even()) record_warning("polar_density: input not flagged even");
    return legendre_transform(f, dual);
}

LogDensity convex_envelope(const LogDensity& f) {
    const GridSpec& g = f.grid();
    const int n = g.dim();
    std::array<double, kMaxDim> spacing{};
    std::array<int, kMaxDim> points{};
    for (int k = 0; k < n; ++k) {
        const double h = g.spacing(k);
        double s = slope_bound(f, k);
        if (!std::isfinite(s)) s = 2.0 * g.half_width(k) / h;
        const double half = 0.5 * h;
        int c = static_cast<int>(std::ceil((s + h) / half));
        c = std::min(c, (default_cap(n) * 16 - 1) / 2);
        spacing[k] = half;
        points[k] = 2 * c + 1;
    }
    const DualGrid dual{make_grid_with_spacing(std::span<const double>(spacing.data(), static_cast<std::size_t>(n)),
                                               std::span<const int>(points.data(), static_cast<std::size_t>(n)))};
    const LogDensity conj = legendre_transform(f, dual);
    return legendre_transform(conj, DualGrid{g});
}

}  // namespace volflow
