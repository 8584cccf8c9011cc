#include "volflow/oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace volflow::oracles {

namespace {

constexpr double kLog2Pi = 1.83787706640934548356;

double need(const std::map<std::string, double>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("closed form needs parameter '" + key + "'");
    return it->second;
}

double opt(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

/// Composite Simpson on [a, b] with an even number of panels.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

LogQuad gaussian_form_integral(const QuadraticForm& qf) {
    const int d = qf.dim();
    if (d < 1 || qf.m.cols() != d) throw std::invalid_argument("gaussian_form_integral: M must be square");
    const Eigen::MatrixXd sym = 0.5 * (qf.m + qf.m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.eigenvalues().minCoeff() <= 0.0) return LogQuad::diverged();
    double log_det = 0.0;
    for (int i = 0; i < d; ++i) log_det += std::log(es.eigenvalues()(i));
    double lin = 0.0;
    if (qf.b.size() == d) {
        const Eigen::VectorXd sol = es.eigenvectors() * (es.eigenvalues().cwiseInverse().asDiagonal() *
                                                         (es.eigenvectors().transpose() * qf.b));
        lin = 0.5 * qf.b.dot(sol);
    } else if (qf.b.size() != 0) {
        throw std::invalid_argument("gaussian_form_integral: b has the wrong length");
    }
    return LogQuad::from_log(0.5 * d * kLog2Pi - 0.5 * log_det + lin - qf.c0);
}

std::vector<double> brute_legendre_1d(std::span<const double> y, std::span<const double> phi,
                                      std::span<const double> x) {
    std::vector<double> out(x.size(), -kInf);
    bool any = false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double m = -kInf;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (!std::isfinite(phi[i])) continue;
            const double v = x[j] * y[i] - phi[i];
            if (v > m) m = v;
            any = true;
        }
        out[j] = m;
    }
    if (!any && !x.empty()) throw std::invalid_argument("brute_legendre_1d: no finite entry");
    return out;
}

LogDensity brute_legendre(const LogDensity& f, const DualGrid& dual) {
    constexpr std::size_t kLimit = std::size_t{1} << 14;
    const GridSpec& pg = f.grid();
    const GridSpec& dg = dual.grid;
    if (pg.total() > kLimit || dg.total() > kLimit)
        throw std::invalid_argument("brute_legendre: more than 2^14 nodes on one side");
    if (pg.dim() != dg.dim()) throw std::invalid_argument("brute_legendre: dimension mismatch");
    const int n = pg.dim();
    std::vector<std::array<double, kMaxDim>> ys;
    std::vector<double> vals;
    for (std::size_t i = 0; i < pg.total(); ++i) {
        if (!std::isfinite(f.phi(i))) continue;
        ys.push_back(pg.node(i));
        vals.push_back(f.phi(i));
    }
    if (ys.empty()) throw std::invalid_argument("brute_legendre: no finite node");
    std::vector<double> out(dg.total());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const auto x = dg.node(j);
        double m = -kInf;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            double dot = x[0] * ys[i][0];
            for (int k = 1; k < n; ++k) dot += x[k] * ys[i][k];
            m = std::max(m, dot - vals[i]);
        }
        out[j] = m;
    }
    return LogDensity(dg, std::move(out), false);
}

std::vector<Eigen::MatrixXd> fd_hessian(const LogDensity& h) {
    // fourth-order centered stencils: exact on polynomials of degree <= 4 in
    // each variable, so a quartic coupling adds no bias to flat directions
    static constexpr double kD1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    static constexpr double kD2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    const GridSpec& g = h.grid();
    const int n = g.dim();
    std::vector<Eigen::MatrixXd> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!std::isfinite(h.phi(i))) continue;
        const auto idx = g.unravel(i);
        bool inside = true;
        for (int a = 0; a < n; ++a) inside = inside && idx[a] >= 2 && idx[a] + 2 < g.points(a);
        if (!inside) continue;
        Eigen::MatrixXd hm(n, n);
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) {
            const auto sa = static_cast<std::ptrdiff_t>(g.stride(a));
            const double ha = g.spacing(a);
            double d2 = 0.0;
            for (int k = -2; k <= 2; ++k) d2 += kD2[k + 2] * h.phi(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + k * sa));
            d2 /= 12.0 * ha * ha;
            ok = std::isfinite(d2);
            hm(a, a) = d2;
            for (int b = a + 1; b < n && ok; ++b) {
                const auto sb = static_cast<std::ptrdiff_t>(g.stride(b));
                const double hb = g.spacing(b);
                double mixed = 0.0;
                for (int k = -2; k <= 2; ++k)
                    for (int l = -2; l <= 2; ++l) {
                        const double w = kD1[k + 2] * kD1[l + 2];
                        if (w != 0.0) mixed += w * h.phi(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + k * sa + l * sb));
                    }
                mixed /= 144.0 * ha * hb;
                ok = std::isfinite(mixed);
                hm(a, b) = hm(b, a) = mixed;
            }
        }
        if (ok) out[i] = hm;
    }
    return out;
}

namespace {

std::string node_text(const GridSpec& g, std::size_t i) {
    const auto x = g.node(i);
    std::ostringstream os;
    os << '(';
    for (int k = 0; k < g.dim(); ++k) os << (k ? ", " : "") << x[k];
    os << ')';
    return os.str();
}

/// Interior-node weights exp(-phi - max) for an unnormalized density.
std::vector<double> interior_weights(const LogDensity& h, const std::vector<Eigen::MatrixXd>& hess) {
    double m = kInf;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (hess[i].size() > 0) m = std::min(m, h.phi(i));
    std::vector<double> w(h.size(), 0.0);
    for (std::size_t i = 0; i < h.size(); ++i)
        if (hess[i].size() > 0) w[i] = std::exp(-(h.phi(i) - m));
    return w;
}

}  // namespace

std::pair<double, double> pbl_check(const LogDensity& h, std::span<const double> g,
                                    const std::vector<Eigen::MatrixXd>& hessians) {
    const GridSpec& grid = h.grid();
    const int n = grid.dim();
    if (g.size() != h.size() || hessians.size() != h.size()) throw std::invalid_argument("pbl_check: size mismatch");
    const auto w = interior_weights(h, hessians);
    double mass = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        mass += w[i];
        mean += w[i] * g[i];
    }
    mean /= mass;
    double var = 0.0, dir = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (hessians[i].size() == 0) continue;
        Eigen::LLT<Eigen::MatrixXd> llt(hessians[i]);
        if (llt.info() != Eigen::Success)
            throw std::domain_error("pbl_check: Hessian not positive definite at " + node_text(grid, i));
        Eigen::VectorXd grad(n);
        for (int a = 0; a < n; ++a) {
            const std::size_t sa = grid.stride(a);
            grad(a) = (g[i + sa] - g[i - sa]) / (2.0 * grid.spacing(a));
        }
        var += w[i] * (g[i] - mean) * (g[i] - mean);
        dir += w[i] * grad.dot(llt.solve(grad));
    }
    return {var / mass, dir / mass};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cramer_rao_check(const LogDensity& h) {
    const GridSpec& grid = h.grid();
    const int n = grid.dim();
    const auto hess = fd_hessian(h);
    const auto w = interior_weights(h, hess);
    double mass = 0.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (w[i] == 0.0) continue;
        const auto x = grid.node(i);
        mass += w[i];
        for (int a = 0; a < n; ++a) mean(a) += w[i] * x[a];
    }
    mean /= mass;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (w[i] == 0.0) continue;
        Eigen::LLT<Eigen::MatrixXd> llt(hess[i]);
        if (llt.info() != Eigen::Success)
            throw std::domain_error("cramer_rao_check: Hessian not positive definite at " + node_text(grid, i));
        const auto x = grid.node(i);
        Eigen::VectorXd d(n);
        for (int a = 0; a < n; ++a) d(a) = x[a] - mean(a);
        cov += w[i] * d * d.transpose();
        info += w[i] * hess[i];
    }
    cov /= mass;
    info /= mass;
    return {cov.inverse(), info};
}

LogDensity tilt(const LogDensity& f, std::span<const double> x, double p) {
    const GridSpec& g = f.grid();
    const int n = g.dim();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("tilt: x has the wrong dimension");
    if (!(p > 0.0)) throw std::invalid_argument("tilt: p must be positive");
    std::vector<double> phi(f.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double v = f.phi(i);
        if (!std::isfinite(v)) {
            phi[i] = kInf;
            continue;
        }
        const auto z = g.node(i);
        double dot = 0.0;
        for (int k = 0; k < n; ++k) dot += x[k] * z[k];
        phi[i] = (v - dot) / p;
    }
    return LogDensity(g, std::move(phi), false);
}

double fd_derivative(const std::vector<std::pair<double, double>>& samples, double t) {
    if (samples.size() != 3) throw std::invalid_argument("fd_derivative: need exactly three samples");
    auto s = samples;
    std::sort(s.begin(), s.end());
    const double d1 = s[1].first - s[0].first, d2 = s[2].first - s[1].first;
    if (!(d1 > 0.0) || std::fabs(d1 - d2) > 1e-9 * std::max(d1, d2))
        throw std::invalid_argument("fd_derivative: samples are not equally spaced");
    if (std::fabs(s[1].first - t) > 1e-9 * std::max(1.0, std::fabs(t)))
        throw std::invalid_argument("fd_derivative: middle sample is not at t");
    return (s[2].second - s[0].second) / (s[2].first - s[0].first);
}

LogQuad gaussian_closed_forms(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "v_gamma") return LogQuad::from_log(opt(params, "n", 1) * kLog2Pi);
    if (name == "fp_variance_law") {
        const double beta = need(params, "beta"), t = need(params, "t");
        const double e = std::exp(-2.0 * t);
        return LogQuad::from_log(std::log(1.0 - e + e * beta));
    }
    if (name == "laplace_gamma_ratio") {
        const double p = need(params, "p"), n = opt(params, "n", 1);
        const double q = p / (p - 1.0);
        // L gamma = e^{|x|^2/2}
        const double top = n / (2.0 * q) * std::log(2.0 * std::numbers::pi / -q);
        const double bottom = -0.5 * n * kLog2Pi + n / (2.0 * p) * std::log(2.0 * std::numbers::pi / p);
        return LogQuad::from_log(top - bottom);
    }
    if (name == "gaussian_lq_norm") {
        const double beta = need(params, "beta"), q = need(params, "q"), n = opt(params, "n", 1);
        // int gamma_beta^q = (2 pi beta)^{n(1-q)/2} q^{-n/2}
        if (!(q > 0.0)) return LogQuad::diverged();
        return LogQuad::from_log((0.5 * n * (1.0 - q) * (kLog2Pi + std::log(beta)) - 0.5 * n * std::log(q)) / q);
    }
    if (name == "ou_exponential") {
        const double a = need(params, "a"), s = need(params, "s"), x = need(params, "x");
        return LogQuad::from_log(std::exp(-s) * a * x + 0.5 * (1.0 - std::exp(-2.0 * s)) * a * a);
    }
    if (name == "laplace_gamma") {
        const double p = need(params, "p"), x = need(params, "x");
        return LogQuad::from_log(-0.5 / p * kLog2Pi + 0.5 * (kLog2Pi + std::log(p)) + x * x / (2.0 * p));
    }
    if (name == "truncated_gaussian") {
        const double beta = need(params, "beta"), r = need(params, "R");
        return LogQuad::from_log(std::log(std::erf(r / std::sqrt(2.0 * beta))));
    }
    if (name == "c_s" || name == "bl_endpoint") {
        const double s = need(params, "s"), n = opt(params, "n", 1);
        const double p = 1.0 - std::exp(-2.0 * s);
        const double cs = n * ((1.0 / p - 1.0) * kLog2Pi - 0.5 * std::log(p));
        return LogQuad::from_log(name == "c_s" ? cs : -cs);
    }
    throw std::invalid_argument("unknown closed form '" + name + "'");
}

double moment_ode_rk4(double m0, double t, int steps) {
    if (steps < 1) throw std::invalid_argument("moment_ode_rk4: steps must be positive");
    auto f = [](double m) { return 2.0 * (1.0 - m); };
    const double h = t / steps;
    double m = m0;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(m), k2 = f(m + 0.5 * h * k1), k3 = f(m + 0.5 * h * k2), k4 = f(m + h * k3);
        m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return m;
}

double lr_disk(double r) {
    // avg over the unit disk of e^{r<x,y>} is 2 I_1(r|x|)/(r|x|)
    auto integrand = [r](double rho) {
        if (rho == 0.0) return 0.0;
        const double u = r * rho;
        return rho * std::pow(2.0 * std::cyl_bessel_i(1.0, u) / u, -1.0 / r);
    };
    const double upper = 60.0;
    return 2.0 * std::numbers::pi * std::numbers::pi * simpson(integrand, 0.0, upper, 60000);
}

double lr_square(double r) {
    // the square [-1,1]^2 factorizes: avg e^{r x y} over [-1,1] is sinh(rx)/(rx)
    auto integrand = [r](double x) {
        const double u = r * std::fabs(x);
        if (u == 0.0) return 1.0;
        const double log_ratio = u + std::log1p(-std::exp(-2.0 * u)) - std::numbers::ln2 - std::log(u);
        return std::exp(-log_ratio / r);
    };
    const double one = 2.0 * simpson(integrand, 0.0, 60.0, 60000);
    return 4.0 * one * one;
}

}  // namespace volflow::oracles
