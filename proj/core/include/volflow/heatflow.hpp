#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "volflow/contract.hpp"
#include "volflow/log_density.hpp"

namespace volflow {

/// Thrown when the kernel standard deviation is below the grid spacing.
class UnderResolvedKernel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One axis of a Gaussian transition kernel, in log form.
///
/// Fokker-Planck: K(x, y) = N(x; e^{-t} y, 1 - e^{-2t}) acting on densities.
/// Ornstein-Uhlenbeck: K(x, y) = N(y; e^{-t} x, 1 - e^{-2t}) acting on functions.
/// Entries include the trapezoid coefficient of the input node y_i, so one
/// row contracted against log f gives the quadrature directly.
struct FlowKernel : AxisKernel {
    enum class Kind { fokker_planck, ornstein_uhlenbeck };

    Kind kind = Kind::fokker_planck;
    double t = 0.0;
    double spacing = 0.0;
};

/// Builds (or fetches from a process-wide cache) the kernel for one axis.
std::shared_ptr<const FlowKernel> flow_kernel(FlowKernel::Kind kind, double t, const GridSpec& grid, int axis);

/// f_t = P_t^* f_0. t = 0 returns f0; t < 0 throws std::invalid_argument.
LogDensity fp_evolve(const LogDensity& f0, double t);

/// P_s g for g = exp(-g.phi()); returns -log P_s g on the same grid.
LogDensity ou_apply(const LogDensity& g, double s);

/// f_t for every t in a strictly increasing list of positive times, each
/// from its own kernel.
std::vector<LogDensity> flow_trajectory(const LogDensity& f0, const std::vector<double>& times);

}  // namespace volflow
