#pragma once

#include <span>
#include <vector>

#include "volflow/log_density.hpp"
#include "volflow/log_quad.hpp"

namespace volflow {

enum class Measure { lebesgue, standard_gaussian };

/// Above this tail_ratio a warning is recorded (never an error).
inline constexpr double kTailWarn = 1e-8;

/// log of the 1D trapezoid coefficients on one grid axis.
std::vector<double> trapezoid_log_weights(const GridSpec& grid, int axis);

/// Tensor trapezoid of exp(log_integrand). -inf entries contribute nothing.
/// Nodes marked in `excluded` are dropped, and finite nodes next to them
/// count as boundary nodes for tail_ratio.
LogQuad log_trapezoid(const GridSpec& grid, std::span<const double> log_integrand,
                      std::span<const unsigned char> excluded = {});

/// log of integral f dmu.
LogQuad log_integral(const LogDensity& f, Measure m = Measure::lebesgue);

/// (1/q) log integral f^q dmu. For q < 0 nodes with f = 0 are excluded.
/// Throws std::invalid_argument for q = 0.
LogQuad log_lq_norm(const LogDensity& f, double q, Measure m = Measure::lebesgue);

/// Same as log_lq_norm but takes log f directly (which may exceed any
/// density bound, e.g. for Laplace transforms).
LogQuad log_lq_norm_of_log(const GridSpec& grid, std::span<const double> log_f, double q,
                           Measure m = Measure::lebesgue);

}  // namespace volflow
