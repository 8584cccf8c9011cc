#pragma once

#include <span>
#include <vector>

#include "volflow/log_density.hpp"

namespace volflow {

/// Grid for the slope (dual) variable of a conjugate.
struct DualGrid {
    GridSpec grid;
};

/// Largest |finite difference| of phi along an axis; +inf when a finite
/// node touches an infinite one.
double slope_bound(const LogDensity& f, int axis);

/// Dual grid with half width (max slope + one spacing) and the primal
/// point counts. Axes with an unbounded slope fall back to fitted_dual_grid.
DualGrid default_dual_grid(const LogDensity& f);

/// Dual grid sized for integrating f° = exp(-phi*): per axis the half width
/// covers the smaller of the slope range and the range over which phi* rises
/// by `decay` nats, in whole primal spacings. The dual spacing equals the
/// primal one unless max_points (0 = by dim) forces a whole multiple of it.
DualGrid fitted_dual_grid(const LogDensity& f, double decay = 40.0, int max_points = 0);

/// phi*(x_j) = max_i [x_j y_i - phi_i] over finite phi_i. y and x ascending.
/// Linear-time hull sweep; the returned numbers are exactly those of the
/// all-pairs max. Throws std::invalid_argument when every phi_i is +inf.
std::vector<double> legendre_1d(std::span<const double> y, std::span<const double> phi,
                                std::span<const double> x);

/// Discrete conjugate over all grid nodes, evaluated on the dual grid one
/// axis at a time.
LogDensity legendre_transform(const LogDensity& f, const DualGrid& dual);

/// f° = exp(-phi*). Records a warning for non-even f.
LogDensity polar_density(const LogDensity& f, const DualGrid& dual);

/// Biconjugate phi** on the original grid, through a dual grid of half the
/// primal spacing that covers the slope range.
LogDensity convex_envelope(const LogDensity& f);

}  // namespace volflow
