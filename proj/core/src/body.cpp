#include "volflow/body.hpp"

#include <cmath>
#include <stdexcept>

namespace volflow {

BodySpec BodySpec::lp_ball(int dim, double r, double radius) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("BodySpec: dim must be 1, 2 or 3");
    if (!(r >= 1.0)) throw std::invalid_argument("BodySpec: l^r ball needs r >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("BodySpec: radius must be positive");
    BodySpec b;
    b.kind_ = Kind::lp_ball;
    b.dim_ = dim;
    b.r_ = r;
    b.radius_ = radius;
    return b;
}

BodySpec BodySpec::ellipsoid(const Eigen::MatrixXd& a) {
    const auto n = a.rows();
    if (n < 1 || n > kMaxDim || a.cols() != n) throw std::invalid_argument("BodySpec: bad ellipsoid matrix");
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("BodySpec: ellipsoid matrix not PD");
    BodySpec b;
    b.kind_ = Kind::ellipsoid;
    b.dim_ = static_cast<int>(n);
    b.a_ = a;
    b.a_inv_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
    return b;
}

double BodySpec::gauge(std::span<const double> x) const {
    if (kind_ == Kind::ellipsoid) {
        double quad = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) quad += x[i] * a_inv_(i, j) * x[j];
        return std::sqrt(quad);
    }
    double norm = 0.0;
    if (std::isinf(r_)) {
        for (int i = 0; i < dim_; ++i) norm = std::max(norm, std::fabs(x[i]));
    } else if (r_ == 1.0) {
        for (int i = 0; i < dim_; ++i) norm += std::fabs(x[i]);
    } else if (r_ == 2.0) {
        for (int i = 0; i < dim_; ++i) norm += x[i] * x[i];
        norm = std::sqrt(norm);
    } else {
        double m = 0.0;
        for (int i = 0; i < dim_; ++i) m = std::max(m, std::fabs(x[i]));
        if (m > 0.0) {
            for (int i = 0; i < dim_; ++i) norm += std::pow(std::fabs(x[i]) / m, r_);
            norm = m * std::pow(norm, 1.0 / r_);
        }
    }
    return norm / radius_;
}

double BodySpec::extent(int axis) const {
    if (kind_ == Kind::ellipsoid) return std::sqrt(a_(axis, axis));
    return radius_;
}

BodySpec BodySpec::scaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("BodySpec::scaled: lambda must be positive");
    if (kind_ == Kind::ellipsoid) return ellipsoid(lambda * lambda * a_);
    return lp_ball(dim_, r_, radius_ * lambda);
}

LogDensity body_to_logdensity(const BodySpec& k, const GridSpec& grid) {
    if (k.dim() != grid.dim()) throw std::invalid_argument("body_to_logdensity: dimension mismatch");
    return LogDensity::from_function(
        grid,
        [&](std::span<const double> x) {
            const double g = k.gauge(x);
            return 0.5 * g * g;
        },
        true);
}

}  // namespace volflow
