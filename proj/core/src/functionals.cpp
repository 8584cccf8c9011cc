#include "volflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "volflow/contract.hpp"
#include "volflow/diagnostics.hpp"
#include "volflow/heatflow.hpp"
#include "volflow/logsumexp.hpp"
#include "volflow/quadrature.hpp"

namespace volflow {

namespace {

constexpr double kLog2Pi = 1.83787706640934548356;
constexpr double kPi = std::numbers::pi;

double squared_norm(const std::array<double, kMaxDim>& x, int n) {
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += x[k] * x[k];
    return r2;
}

int odd_points(double width, double spacing, int cap) {
    int m = static_cast<int>(std::ceil(2.0 * width / spacing)) + 1;
    if (m % 2 == 0) ++m;
    m = std::max(m, 3);
    if (cap > 0 && m > cap) m = cap % 2 == 1 ? cap : cap - 1;
    return m;
}

}  // namespace

// ---- volume product -------------------------------------------------------

LogQuad volume_product(const LogDensity& f, const DualGrid& dual) {
    if (!f.even()) record_warning("volume_product: input not flagged even");
    const LogQuad primal = log_integral(f);
    const LogQuad polar = log_integral(polar_density(f, dual));
    LogQuad v = LogQuad::from_log(primal.log_abs + polar.log_abs, std::max(primal.tail_ratio, polar.tail_ratio));
    v.flagged = polar.tail_ratio > kPolarTailFlag;
    return v;
}

LogQuad volume_product(const LogDensity& f) { return volume_product(f, fitted_dual_grid(f)); }

// ---- constants --------------------------------------------------------------

double log_c_s(double s, int dim) {
    const double p = -std::expm1(-2.0 * s);
    return dim * ((1.0 / p - 1.0) * kLog2Pi - 0.5 * std::log(p));
}

double log_bridge_constant(int dim) { return dim * kLog2Pi; }

// ---- reverse hypercontractivity ---------------------------------------------

RevHCReport rev_hc_value(const LogDensity& f0, double s, double p, double q) {
    if (!(s > 0.0) || !(p > 0.0) || !(q < 0.0)) throw std::invalid_argument("rev_hc_value: need s > 0, p > 0, q < 0");
    const GridSpec& g = f0.grid();
    const int n = g.dim();
    // -log (f0/gamma)^{1/p}
    std::vector<double> phi(f0.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double v = f0.phi(i);
        phi[i] = std::isfinite(v) ? (v - 0.5 * squared_norm(g.node(i), n) - 0.5 * n * kLog2Pi) / p : kInf;
    }
    const LogDensity gfun(g, std::move(phi), f0.even());
    const LogDensity smoothed = ou_apply(gfun, s);
    RevHCReport r;
    r.log_lhs = log_lq_norm(smoothed, q, Measure::standard_gaussian);
    const LogQuad mass = log_integral(f0);
    r.log_rhs = LogQuad::from_log(mass.log_abs / p, mass.tail_ratio);
    r.slack = r.log_lhs.log_abs - r.log_rhs.log_abs;
    return r;
}

LogQuad gaussian_rev_hc(double beta, const std::vector<double>& shift, double s, double p, double q) {
    if (!(beta > 0.0)) throw std::invalid_argument("gaussian_rev_hc: beta must be positive");
    if (!(s > 0.0) || !(p > 0.0) || !(q < 0.0)) throw std::invalid_argument("gaussian_rev_hc: need s > 0, p > 0, q < 0");
    if (shift.empty()) throw std::invalid_argument("gaussian_rev_hc: shift sets the dimension and cannot be empty");
    const double var = -std::expm1(-2.0 * s);
    const double e1 = std::exp(-s), e2 = std::exp(-2.0 * s);
    double total = 0.0;
    bool outer_diverges = false;
    for (double a : shift) {
        // log (gamma_beta(y + a)/gamma(y))^{1/p} = -A y^2/2 - B y - C
        const double A = (1.0 / beta - 1.0) / p;
        const double B = (a / beta) / p;
        const double C = (a * a / (2.0 * beta) + 0.5 * std::log(beta)) / p;
        const double M = 1.0 / var + A;
        if (!(M > 0.0)) {
            // the smoothing integral is infinite, so the norm is +inf
            LogQuad r = LogQuad::diverged();
            r.sign = 1;
            return r;
        }
        // log P_s g(x) = a2 x^2 + a1 x + a0
        const double a2 = e2 / (2.0 * M * var * var) - e2 / (2.0 * var);
        const double a1 = -B * e1 / (M * var);
        const double a0 = B * B / (2.0 * M) - C - 0.5 * std::log(var * M);
        const double m2 = 1.0 - 2.0 * q * a2;
        if (!(m2 > 0.0)) {
            outer_diverges = true;
            continue;
        }
        total += (-0.5 * std::log(m2) + q * q * a1 * a1 / (2.0 * m2) + q * a0) / q;
    }
    if (outer_diverges) {
        LogQuad r;
        r.divergent = true;
        return r;
    }
    return LogQuad::from_log(total);
}

LogQuad gaussian_rev_hc_inf(const std::vector<double>& betas, const std::vector<double>& shifts, int dim, double s,
                            double p, double q) {
    LogQuad best = LogQuad::diverged();
    best.sign = 1;
    for (double b : betas) {
        for (double a : shifts) {
            std::vector<double> shift(static_cast<std::size_t>(dim), 0.0);
            shift[0] = a;
            const LogQuad v = gaussian_rev_hc(b, shift, s, p, q);
            if (v.log_abs < best.log_abs || (v.sign == 0 && best.sign != 0)) best = v;
        }
    }
    return best;
}

// ---- Laplace-transform functionals ------------------------------------------

GridSpec laplace_x_grid(const LogDensity& f, double p, double q, double decay) {
    return fitted_dual_grid(f, decay * p / std::fabs(q)).grid;
}

LaplaceResult laplace_f_t(const LogDensity& f, double p, const GridSpec& x_grid) {
    if (!(p > 0.0)) throw std::invalid_argument("laplace_f_t: p must be positive");
    const GridSpec& zg = f.grid();
    const int n = zg.dim();
    if (x_grid.dim() != n) throw std::invalid_argument("laplace_f_t: grid dimension mismatch");
    std::vector<AxisKernel> ks;
    ks.reserve(static_cast<std::size_t>(n));
    std::vector<const AxisKernel*> kp;
    for (int k = 0; k < n; ++k) {
        ks.push_back(exponential_kernel(x_grid, zg, k, 1.0 / p));
        kp.push_back(&ks.back());
    }
    std::vector<double> lv(f.size());
    for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = std::isfinite(f.phi(i)) ? -f.phi(i) / p : -kInf;

    LaplaceResult r;
    r.x_grid = x_grid;
    r.log_f = contract_axes(zg, x_grid, std::move(lv), kp);

    // where the largest integrand term sits on the edge of the z box, F is
    // a truncation artefact; compare the edge-only conjugate with the full one
    std::vector<double> edge(f.size(), kInf);
    for (std::size_t i = 0; i < edge.size(); ++i)
        if (zg.on_boundary(i)) edge[i] = f.phi(i);
    r.boundary.assign(x_grid.total(), 0);
    bool edge_finite = false;
    for (double v : edge) edge_finite = edge_finite || std::isfinite(v);
    if (edge_finite) {
        const LogDensity all = legendre_transform(f, DualGrid{x_grid});
        const LogDensity rim = legendre_transform(LogDensity(zg, std::move(edge), f.even()), DualGrid{x_grid});
        const double thresh = std::log(kTailWarn);
        for (std::size_t j = 0; j < r.boundary.size(); ++j) {
            if ((rim.phi(j) - all.phi(j)) / p > thresh) {
                r.boundary[j] = 1;
                ++r.flagged_nodes;
            }
        }
    }
    return r;
}

namespace {

/// One x grid for several densities: widest half width, finest spacing.
GridSpec merged_x_grid(const std::vector<GridSpec>& grids) {
    const int n = grids.front().dim();
    std::array<double, kMaxDim> spacing{};
    std::array<int, kMaxDim> points{};
    const int cap = n == 1 ? 16385 : n == 2 ? 1025 : 129;
    for (int k = 0; k < n; ++k) {
        double w = 0.0, h = kInf;
        for (const auto& g : grids) {
            w = std::max(w, g.half_width(k));
            h = std::min(h, g.spacing(k));
        }
        points[k] = odd_points(w, h, cap);
        spacing[k] = 2.0 * w / (points[k] - 1);
    }
    return make_grid_with_spacing(std::span<const double>(spacing.data(), static_cast<std::size_t>(n)),
                                  std::span<const int>(points.data(), static_cast<std::size_t>(n)));
}

double laplace_q_value(const LogDensity& ft, double p, double q, const GridSpec& xg, double* tail) {
    const LaplaceResult lf = laplace_f_t(ft, p, xg);
    const LogQuad norm = log_lq_norm_of_log(xg, lf.log_f, q);
    if (tail != nullptr) *tail = norm.tail_ratio;
    return q * norm.log_abs;
}

}  // namespace

std::vector<QPoint> q_functional(const LogDensity& f0, double s, const std::vector<double>& times) {
    const ExponentSchedule ex = ExponentSchedule::endpoint(s);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0) throw std::invalid_argument("q_functional: negative time");
        if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("q_functional: times must increase");
    }
    std::vector<LogDensity> evolved;
    std::vector<GridSpec> grids;
    for (double t : times) {
        evolved.push_back(fp_evolve(f0, t));
        grids.push_back(laplace_x_grid(evolved.back(), ex.p, ex.q));
    }
    const GridSpec xg = merged_x_grid(grids);
    std::vector<QPoint> out;
    for (std::size_t i = 0; i < times.size(); ++i) {
        QPoint pt;
        pt.t = times[i];
        pt.value = laplace_q_value(evolved[i], ex.p, ex.q, xg, &pt.tail_ratio);
        pt.flagged = pt.tail_ratio > 1e-6;
        out.push_back(pt);
    }
    return out;
}

EquivForm equiv_form_check(const LogDensity& f, double s) {
    const ExponentSchedule ex = ExponentSchedule::endpoint(s);
    const int n = f.dim();
    const RevHCReport rev = rev_hc_value(f, s, ex.p, ex.q);
    EquivForm r;
    r.ou_route = LogQuad::from_log(ex.q * rev.log_lhs.log_abs, rev.log_lhs.tail_ratio);
    double tail = 0.0;
    const double qv = laplace_q_value(f, ex.p, ex.q, laplace_x_grid(f, ex.p, ex.q), &tail);
    r.laplace_route = LogQuad::from_log(ex.q * log_c_s(s, n) + n * s + qv, tail);
    return r;
}

LogQuad laplace_norm_ratio(const LogDensity& f, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("laplace_norm_ratio: need 0 < p < 1");
    const double q = p / (p - 1.0);
    const GridSpec xg = laplace_x_grid(f, 1.0, q);
    const LaplaceResult lf = laplace_f_t(f, 1.0, xg);
    const LogQuad top = log_lq_norm_of_log(xg, lf.log_f, q);
    const LogQuad bottom = log_lq_norm(f, p);
    LogQuad r = LogQuad::from_log(top.log_abs - bottom.log_abs, std::max(top.tail_ratio, bottom.tail_ratio));
    r.flagged = top.tail_ratio > 1e-6;
    return r;
}

// ---- inverse Brascamp-Lieb ----------------------------------------------------

namespace {

BLData assemble_bl(const ExponentSchedule& ex, double q11, double q12, double q22, int dim) {
    BLData d;
    d.exponents = ex;
    d.dim = dim;
    d.q11 = q11;
    d.q12 = q12;
    d.q22 = q22;
    d.qform = Eigen::MatrixXd::Zero(2 * dim, 2 * dim);
    for (int k = 0; k < dim; ++k) {
        d.qform(k, k) = q11;
        d.qform(k, dim + k) = d.qform(dim + k, k) = q12;
        d.qform(dim + k, dim + k) = q22;
    }
    return d;
}

}  // namespace

BLData make_bl_data(double s, double p, double q, int dim) {
    const ExponentSchedule ex = ExponentSchedule::custom(s, p, q);
    const double var = -std::expm1(-2.0 * s);
    const double pref = 1.0 / (2.0 * kPi * var);
    return assemble_bl(ex, pref * (1.0 - var / p), -pref * std::exp(-s),
                       pref * std::exp(-2.0 * s) * (1.0 + std::expm1(2.0 * s) / q), dim);
}

BLData endpoint_bl_data(double s, int dim) {
    const ExponentSchedule ex = ExponentSchedule::endpoint(s);
    const double var = ex.p;
    const double pref = 1.0 / (2.0 * kPi * var);
    // both diagonal blocks vanish identically at the endpoint
    return assemble_bl(ex, 0.0, -pref * std::exp(-s), 0.0, dim);
}

LogQuad bl_integral(const LogDensity& f1, const LogDensity& f2, const BLData& d) {
    const GridSpec& g1 = f1.grid();
    const GridSpec& g2 = f2.grid();
    const int n = g1.dim();
    if (g2.dim() != n || d.dim != n) throw std::invalid_argument("bl_integral: dimension mismatch");
    const double c1 = d.exponents.c1, c2 = d.exponents.c2;

    std::vector<double> inner(f1.size());
    for (std::size_t i = 0; i < inner.size(); ++i)
        inner[i] = std::isfinite(f1.phi(i)) ? -c1 * f1.phi(i) - kPi * d.q11 * squared_norm(g1.node(i), n) : -kInf;
    std::vector<AxisKernel> ks;
    ks.reserve(static_cast<std::size_t>(n));
    std::vector<const AxisKernel*> kp;
    for (int k = 0; k < n; ++k) {
        ks.push_back(exponential_kernel(g2, g1, k, -2.0 * kPi * d.q12));
        kp.push_back(&ks.back());
    }
    auto outer = contract_axes(g1, g2, std::move(inner), kp);
    for (std::size_t i = 0; i < outer.size(); ++i) {
        if (!std::isfinite(f2.phi(i)) || outer[i] == -kInf) {
            outer[i] = -kInf;
            continue;
        }
        outer[i] += -c2 * f2.phi(i) - kPi * d.q22 * squared_norm(g2.node(i), n);
    }
    return log_trapezoid(g2, outer);
}

double bl_gaussian_objective(const BLData& d, const std::vector<double>& a1, const std::vector<double>& a2) {
    if (static_cast<int>(a1.size()) != d.dim || static_cast<int>(a2.size()) != d.dim)
        throw std::invalid_argument("bl_gaussian_objective: one variance per coordinate");
    const double c1 = d.exponents.c1, c2 = d.exponents.c2;
    double total = 0.0;
    for (int k = 0; k < d.dim; ++k) {
        const double x = a1[static_cast<std::size_t>(k)], y = a2[static_cast<std::size_t>(k)];
        if (!(x > 0.0) || !(y > 0.0)) return kInf;
        const double m11 = 2.0 * kPi * d.q11 + c1 / x;
        const double m22 = 2.0 * kPi * d.q22 + c2 / y;
        const double m12 = 2.0 * kPi * d.q12;
        const double det = m11 * m22 - m12 * m12;
        if (!(m11 > 0.0) || !(det > 0.0)) return kInf;
        total += kLog2Pi - 0.5 * std::log(det) - 0.5 * c1 * (kLog2Pi + std::log(x)) - 0.5 * c2 * (kLog2Pi + std::log(y));
    }
    return total;
}

BLConstant gaussian_bl_constant(const BLData& d, double log_box, double rel_tol) {
    // diagonal covariances and identity blocks: every coordinate solves the same
    // two-variable problem
    BLData one = d;
    one.dim = 1;
    auto objective = [&](double u1, double u2) {
        return bl_gaussian_objective(one, {std::exp(u1)}, {std::exp(u2)});
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    auto line_min = [&](auto&& f, double lo, double hi) {
        double a = lo, b = hi;
        double c = b - phi * (b - a), e = a + phi * (b - a);
        double fc = f(c), fe = f(e);
        while (b - a > rel_tol * (1.0 + std::fabs(a) + std::fabs(b)) * 1e-2) {
            // infinite values sit on the large-variance side: move away from them
            const bool left = (fc < fe) || (std::isinf(fc) && std::isinf(fe));
            if (left) {
                b = e;
                e = c;
                fe = fc;
                c = b - phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = e;
                fc = fe;
                e = a + phi * (b - a);
                fe = f(e);
            }
        }
        return 0.5 * (a + b);
    };

    double u1 = 0.0, u2 = 0.0;
    double val = objective(u1, u2);
    for (int it = 0; it < 500; ++it) {
        const double prev = val;
        u1 = line_min([&](double u) { return objective(u, u2); }, -log_box, log_box);
        u2 = line_min([&](double u) { return objective(u1, u); }, -log_box, log_box);
        val = objective(u1, u2);
        if (std::isfinite(prev) && std::fabs(prev - val) <= rel_tol * std::max(1.0, std::fabs(val))) break;
    }
    // a flat direction (as at the endpoint exponents) leaves the minimizer
    // free along a curve; report the balanced point when it is as good
    const double mid = 0.5 * (u1 + u2);
    const double vmid = objective(mid, mid);
    if (vmid <= val + 1e-12 * std::max(1.0, std::fabs(val))) {
        u1 = u2 = mid;
        val = vmid;
    }

    BLConstant r;
    r.a1.assign(static_cast<std::size_t>(d.dim), std::exp(u1));
    r.a2.assign(static_cast<std::size_t>(d.dim), std::exp(u2));
    r.boundary_log = d.dim * val;
    const double edge = log_box * (1.0 - 1e-3);
    r.degenerate = !std::isfinite(val) || std::fabs(u1) >= edge || std::fabs(u2) >= edge;
    if (r.degenerate) {
        r.value = LogQuad{};
        r.value.flagged = true;
    } else {
        r.value = LogQuad::from_log(d.dim * val);
    }
    return r;
}

// ---- L^r volume product -------------------------------------------------------

namespace {

/// log of int_a^b e^{u y} dy.
double log_strip(double u, double a, double b) {
    const double w = b - a;
    if (w <= 0.0) return -kInf;
    if (u == 0.0) return std::log(w);
    if (u > 0.0) return u * b + std::log(-std::expm1(-u * w)) - std::log(u);
    return u * a + std::log(-std::expm1(u * w)) - std::log(-u);
}

/// The chord {y1 : (y1, y2) in K} as [lo, hi]; empty when lo > hi.
std::pair<double, double> chord(const BodySpec& k, double y2) {
    const double e1 = k.extent(0);
    auto g = [&](double y1) {
        const double y[2] = {y1, y2};
        return k.gauge(std::span<const double>(y, 2));
    };
    // gauge is convex in y1: find its minimum, then both crossings of 1
    double a = -e1, b = e1;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < 200 && b - a > 1e-15 * e1; ++i) {
        const double c = b - phi * (b - a), e = a + phi * (b - a);
        if (g(c) < g(e))
            b = e;
        else
            a = c;
    }
    const double mid = 0.5 * (a + b);
    if (g(mid) > 1.0) return {1.0, -1.0};
    auto cross = [&](double inside, double outside) {
        for (int i = 0; i < 200; ++i) {
            const double m = 0.5 * (inside + outside);
            if (m == inside || m == outside) break;
            (g(m) <= 1.0 ? inside : outside) = m;
        }
        return 0.5 * (inside + outside);
    };
    const double pad = 2.0 * e1 + 1.0;
    return {cross(mid, mid - pad), cross(mid, mid + pad)};
}

}  // namespace

LogQuad lr_volume_product(const BodySpec& k, double r, const LrOptions& opt) {
    if (!(r > 0.0)) throw std::invalid_argument("lr_volume_product: r must be positive");
    const int n = k.dim();
    if (n != 1 && n != 2) throw std::invalid_argument("lr_volume_product: dimension 1 or 2 only");

    // strips across K (a single strip in 1D)
    std::vector<double> ys, lo, hi;
    double log_row = 0.0;
    if (n == 1) {
        ys.push_back(0.0);
        lo.push_back(-k.extent(0));
        hi.push_back(k.extent(0));
    } else {
        const double e2 = k.extent(1);
        const double hr = 2.0 * e2 / opt.rows;
        log_row = std::log(hr);
        for (int j = 0; j < opt.rows; ++j) {
            const double y2 = -e2 + (j + 0.5) * hr;
            const auto [a, b] = chord(k, y2);
            if (a >= b) continue;
            ys.push_back(y2);
            lo.push_back(a);
            hi.push_back(b);
        }
    }
    std::vector<double> strip0(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) strip0[j] = log_strip(0.0, lo[j], hi[j]) + log_row;
    const double log_vol = logsumexp(strip0);

    std::array<double, kMaxDim> spacing{};
    std::array<int, kMaxDim> points{};
    for (int a = 0; a < n; ++a) {
        const double w = opt.decay / k.extent(a);
        points[a] = odd_points(w, opt.outer_spacing, 0);
        spacing[a] = 2.0 * w / (points[a] - 1);
    }
    const GridSpec xg = make_grid_with_spacing(std::span<const double>(spacing.data(), static_cast<std::size_t>(n)),
                                               std::span<const int>(points.data(), static_cast<std::size_t>(n)));
    const auto x1 = xg.axis_coords(0);
    const std::size_t n1 = x1.size();
    const std::size_t n2 = n == 2 ? static_cast<std::size_t>(xg.points(1)) : 1;
    const std::vector<double> x2 = n == 2 ? xg.axis_coords(1) : std::vector<double>{0.0};

    std::vector<double> integrand(xg.total(), -kInf);
    std::vector<double> strips(ys.size()), terms(ys.size());
    for (std::size_t i = 0; i < n1; ++i) {
        const double u = r * x1[i];
        for (std::size_t j = 0; j < ys.size(); ++j) strips[j] = log_strip(u, lo[j], hi[j]) + log_row;
        for (std::size_t l = 0; l < n2; ++l) {
            // central symmetry: I(-x) = I(x)
            const std::size_t idx = i * n2 + l;
            const std::size_t mirror = (n1 - 1 - i) * n2 + (n2 - 1 - l);
            if (mirror < idx) {
                integrand[idx] = integrand[mirror];
                continue;
            }
            for (std::size_t j = 0; j < ys.size(); ++j) terms[j] = strips[j] + r * x2[l] * ys[j];
            const double log_i = logsumexp(terms);
            integrand[idx] = -(log_i - log_vol) / r;
        }
    }
    LogQuad outer = log_trapezoid(xg, integrand);
    LogQuad res = LogQuad::from_log(log_vol + outer.log_abs, outer.tail_ratio);
    res.flagged = outer.tail_ratio > 1e-6;
    return res;
}

// ---- s -> 0 bridge --------------------------------------------------------------

TropicalCurve tropical_limit_curve(const LogDensity& f, const std::vector<double>& s_list) {
    for (std::size_t i = 1; i < s_list.size(); ++i)
        if (!(s_list[i] < s_list[i - 1])) throw std::invalid_argument("tropical_limit_curve: s values must decrease");
    TropicalCurve c;
    const int n = f.dim();
    const LogQuad mass = log_integral(f);
    for (double s : s_list) {
        const ExponentSchedule ex = ExponentSchedule::endpoint(s);
        try {
            const RevHCReport rev = rev_hc_value(f, s, ex.p, ex.q);
            TropicalPoint pt;
            pt.s = s;
            pt.log_bridge = log_bridge_constant(n) - (ex.q / ex.p) * mass.log_abs + ex.q * rev.log_lhs.log_abs;
            pt.tail_ratio = rev.log_lhs.tail_ratio;
            pt.flagged = pt.tail_ratio > 1e-6;
            c.points.push_back(pt);
        } catch (const UnderResolvedKernel&) {
            c.truncated = true;
            break;
        }
    }
    return c;
}

}  // namespace volflow
