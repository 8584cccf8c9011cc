#pragma once

#include <map>
#include <string>
#include <vector>

#include "volflow/log_density.hpp"

namespace volflow {

/// Named even test density with numeric parameters.
///
///   gaussian   beta (variance, default 1), mass (default 1)
///   box        a (half width, default 1); nodes exactly on the jump get f = 1/2
///   exp_power  alpha (default 1), scale (default 1): exp(-(|x|/scale)^alpha), |x| Euclidean
///   mixture    shift m (default 0.8): (gamma(x - m e1) + gamma(x + m e1)) / 2
///   cross      2D only: phi = (x1^2 + x2^2)/2 + x1^2 x2^2 / 2
///   quartic    a (default 1), b (default 0): exp(-a x^4 - b x^2), coordinatewise sum
///
/// Every family also accepts `mass`, a constant factor.
struct DensitySpec {
    std::string family = "gaussian";
    std::map<std::string, double> params;

    double param(const std::string& key, double fallback) const;
    std::string label() const;
};

LogDensity make_density(const DensitySpec& spec, const GridSpec& grid);

/// Even test battery: in 1D box, exp_power alpha in {1, 1.5, 3, 4} and the
/// mixture; in 2D the cross density.
std::vector<DensitySpec> battery(int dim);

}  // namespace volflow
