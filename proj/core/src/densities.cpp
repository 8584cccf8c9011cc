#include "volflow/densities.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace volflow {

double DensitySpec::param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::string DensitySpec::label() const {
    std::ostringstream os;
    os << family;
    for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
    return os.str();
}

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2 pi) / 2

}  // namespace

LogDensity make_density(const DensitySpec& spec, const GridSpec& grid) {
    const int n = grid.dim();
    const double log_mass = std::log(spec.param("mass", 1.0));
    const std::string& fam = spec.family;
    std::function<double(std::span<const double>)> phi;

    if (fam == "gaussian") {
        const double beta = spec.param("beta", 1.0);
        if (!(beta > 0.0)) throw std::invalid_argument("gaussian: beta must be positive");
        const double c = n * (kHalfLog2Pi + 0.5 * std::log(beta));
        phi = [=](std::span<const double> x) {
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            return 0.5 * r2 / beta + c;
        };
    } else if (fam == "box") {
        const double a = spec.param("a", 1.0);
        if (!(a > 0.0)) throw std::invalid_argument("box: a must be positive");
        phi = [=](std::span<const double> x) {
            double v = 0.0;
            for (double xi : x) {
                const double ax = std::fabs(xi);
                if (ax > a) return kInf;
                if (ax == a) v += std::numbers::ln2;
            }
            return v;
        };
    } else if (fam == "exp_power") {
        const double alpha = spec.param("alpha", 1.0);
        const double scale = spec.param("scale", 1.0);
        if (!(alpha > 0.0) || !(scale > 0.0)) throw std::invalid_argument("exp_power: alpha, scale must be positive");
        phi = [=](std::span<const double> x) {
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            return std::pow(std::sqrt(r2) / scale, alpha);
        };
    } else if (fam == "mixture") {
        const double m = spec.param("shift", 0.8);
        phi = [=](std::span<const double> x) {
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            // log((e^{-(x1-m)^2/2} + e^{-(x1+m)^2/2})/2) = -(x1^2+m^2)/2 + log cosh(m x1)
            const double u = std::fabs(m * x[0]);
            const double log_cosh = u + std::log1p(std::exp(-2.0 * u)) - std::numbers::ln2;
            return 0.5 * (r2 + m * m) - log_cosh + n * kHalfLog2Pi;
        };
    } else if (fam == "cross") {
        if (n != 2) throw std::invalid_argument("cross density is two-dimensional");
        phi = [](std::span<const double> x) {
            return 0.5 * (x[0] * x[0] + x[1] * x[1]) + 0.5 * x[0] * x[0] * x[1] * x[1];
        };
    } else if (fam == "quartic") {
        const double a = spec.param("a", 1.0);
        const double b = spec.param("b", 0.0);
        phi = [=](std::span<const double> x) {
            double v = 0.0;
            for (double xi : x) {
                const double x2 = xi * xi;
                v += a * x2 * x2 + b * x2;
            }
            return v;
        };
    } else {
        throw std::invalid_argument("unknown density family '" + fam + "'");
    }

    auto f = LogDensity::from_function(grid, phi, true);
    return log_mass == 0.0 ? f : f.scaled(log_mass);
}

std::vector<DensitySpec> battery(int dim) {
    std::vector<DensitySpec> out;
    if (dim == 2) return {{"cross", {}}};
    out.push_back({"box", {}});
    for (double alpha : {1.0, 1.5, 3.0, 4.0}) out.push_back({"exp_power", {{"alpha", alpha}}});
    out.push_back({"mixture", {{"shift", 0.8}}});
    return out;
}

}  // namespace volflow
