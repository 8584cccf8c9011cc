#pragma once

#include <Eigen/Dense>

#include "volflow/log_density.hpp"

namespace volflow {

/// c * gamma_A: centered Gaussian with covariance A scaled by mass c.
struct GaussianSpec {
    double mass = 1.0;
    Eigen::MatrixXd covariance;

    int dim() const { return static_cast<int>(covariance.rows()); }

    /// Throws std::invalid_argument unless mass > 0 and A is symmetric PD.
    static GaussianSpec make(double mass, Eigen::MatrixXd covariance);
    /// c * gamma_beta in dimension n (covariance beta * id).
    static GaussianSpec isotropic(int dim, double beta, double mass = 1.0);
};

/// phi(x) = 1/2 <x, A^{-1} x> + 1/2 log det(2 pi A) - log c.
LogDensity gaussian_to_logdensity(const GaussianSpec& g, const GridSpec& grid);

}  // namespace volflow
