#include "volflow/log_density.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace volflow {

LogDensity::LogDensity(GridSpec grid, std::vector<double> phi, bool even)
    : grid_(std::move(grid)), phi_(std::move(phi)), even_(even) {
    if (grid_.dim() == 0) throw std::invalid_argument("LogDensity: empty grid");
    if (phi_.size() != grid_.total())
        throw std::invalid_argument("LogDensity: phi has " + std::to_string(phi_.size()) +
                                    " entries, grid has " + std::to_string(grid_.total()));
    bool any_finite = false;
    for (double v : phi_) {
        if (std::isnan(v)) throw std::invalid_argument("LogDensity: NaN entry");
        if (v == -kInf) throw std::invalid_argument("LogDensity: -inf entry (f = inf)");
        any_finite = any_finite || std::isfinite(v);
    }
    if (!any_finite) throw std::invalid_argument("LogDensity: no finite node");
    if (even_ && odd_defect(grid_, phi_) != 0.0)
        throw std::invalid_argument("LogDensity: flagged even but phi(x) != phi(-x)");
}

LogDensity LogDensity::from_function(const GridSpec& grid,
                                     const std::function<double(std::span<const double>)>& phi,
                                     bool even) {
    std::vector<double> values(grid.total());
    const int n = grid.dim();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto x = grid.node(i);
        values[i] = phi(std::span<const double>(x.data(), static_cast<std::size_t>(n)));
    }
    return LogDensity(grid, std::move(values), even);
}

LogDensity LogDensity::scaled(double log_c) const {
    std::vector<double> out(phi_);
    for (double& v : out)
        if (std::isfinite(v)) v -= log_c;
    return LogDensity(grid_, std::move(out), even_);
}

double odd_defect(const GridSpec& grid, std::span<const double> phi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double a = phi[i];
        const double b = phi[grid.mirror(i)];
        if (a == b) continue;
        if (std::isinf(a) || std::isinf(b)) return kInf;
        worst = std::max(worst, std::fabs(a - b));
    }
    return worst;
}

bool check_even(const LogDensity& f, double tol) { return odd_defect(f.grid(), f.phi()) <= tol; }

}  // namespace volflow
