#pragma once

#include <span>

#include <Eigen/Dense>

#include "volflow/log_density.hpp"

namespace volflow {

/// Symmetric convex body described by its gauge ||x||_K.
class BodySpec {
public:
    enum class Kind { lp_ball, ellipsoid };

    /// radius * B_r^n; r = inf gives the cube.
    static BodySpec lp_ball(int dim, double r, double radius = 1.0);
    /// {x : <x, A^{-1} x> <= 1}.
    static BodySpec ellipsoid(const Eigen::MatrixXd& a);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double exponent() const { return r_; }
    double radius() const { return radius_; }

    double gauge(std::span<const double> x) const;
    bool contains(std::span<const double> x) const { return gauge(x) <= 1.0; }
    /// Smallest R with K inside [-R, R] along the given axis.
    double extent(int axis) const;
    /// Same body scaled by lambda.
    BodySpec scaled(double lambda) const;

private:
    Kind kind_ = Kind::lp_ball;
    int dim_ = 1;
    double r_ = 2.0;
    double radius_ = 1.0;
    Eigen::MatrixXd a_;
    Eigen::MatrixXd a_inv_;
};

/// phi(x) = 1/2 ||x||_K^2.
LogDensity body_to_logdensity(const BodySpec& k, const GridSpec& grid);

}  // namespace volflow
