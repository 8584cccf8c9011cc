#pragma once

#include <functional>
#include <span>
#include <vector>

#include "volflow/grid.hpp"
#include "volflow/log_quad.hpp"

namespace volflow {

/// f = exp(-phi) sampled on a grid. phi = +inf marks f = 0 exactly.
///
/// Construction validates: no NaN, no -inf, at least one finite node, and
/// node-exact evenness when the even flag is set.
class LogDensity {
public:
    LogDensity(GridSpec grid, std::vector<double> phi, bool even);

    /// Samples phi(x) at every node. phi receives a span of length dim.
    static LogDensity from_function(const GridSpec& grid,
                                    const std::function<double(std::span<const double>)>& phi,
                                    bool even);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> phi() const { return phi_; }
    double phi(std::size_t i) const { return phi_[i]; }
    bool even() const { return even_; }
    int dim() const { return grid_.dim(); }
    std::size_t size() const { return phi_.size(); }

    /// f * c, i.e. phi - log c.
    LogDensity scaled(double log_c) const;

private:
    GridSpec grid_;
    std::vector<double> phi_;
    bool even_ = false;
};

/// max_x |phi(x) - phi(-x)| <= tol, with inf == inf treated as equal.
bool check_even(const LogDensity& f, double tol = 0.0);

/// Largest |phi(x) - phi(-x)| over nodes (0 when exactly even; inf when
/// only one of the pair is infinite).
double odd_defect(const GridSpec& grid, std::span<const double> phi);

}  // namespace volflow
