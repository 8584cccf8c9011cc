#pragma once

#include <vector>

#include "volflow/grid.hpp"

namespace volflow {

/// Log weights of a separable integral operator along one axis:
/// out[j] = log sum_i exp(log_w[j][i] + in[i]).
struct AxisKernel {
    int out_points = 0;
    int in_points = 0;
    std::vector<double> log_w;  // row-major, out_points x in_points

    double at(int j, int i) const {
        return log_w[static_cast<std::size_t>(j) * static_cast<std::size_t>(in_points) + static_cast<std::size_t>(i)];
    }
};

/// Applies one kernel per axis in turn, mapping values on `in` to values on
/// `out`. Sums run outward from the middle input node in mirrored pairs, so
/// a kernel with K[-j][-i] == K[j][i] maps even data to exactly even data.
std::vector<double> contract_axes(const GridSpec& in, const GridSpec& out, std::vector<double> log_values,
                                  const std::vector<const AxisKernel*>& kernels);

/// Kernel exp(scale * x_j * z_i) times the trapezoid weight of z_i.
AxisKernel exponential_kernel(const GridSpec& out, const GridSpec& in, int axis, double scale);

}  // namespace volflow
