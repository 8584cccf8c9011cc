#include "volflow/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace volflow {

GaussianSpec GaussianSpec::make(double mass, Eigen::MatrixXd covariance) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("GaussianSpec: mass must be positive");
    const auto n = covariance.rows();
    if (n < 1 || n != covariance.cols()) throw std::invalid_argument("GaussianSpec: covariance must be square");
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * covariance.cwiseAbs().maxCoeff())
        throw std::invalid_argument("GaussianSpec: covariance not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("GaussianSpec: covariance not positive definite");
    return GaussianSpec{mass, std::move(covariance)};
}

GaussianSpec GaussianSpec::isotropic(int dim, double beta, double mass) {
    return make(mass, beta * Eigen::MatrixXd::Identity(dim, dim));
}

LogDensity gaussian_to_logdensity(const GaussianSpec& g, const GridSpec& grid) {
    const int n = g.dim();
    if (n != grid.dim()) throw std::invalid_argument("gaussian_to_logdensity: dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(g.covariance);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("gaussian_to_logdensity: singular covariance");
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::MatrixXd l = llt.matrixL();
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += 2.0 * std::log(l(i, i));
    const double offset = 0.5 * (n * std::log(2.0 * std::numbers::pi) + log_det) - std::log(g.mass);
    return LogDensity::from_function(
        grid,
        [&](std::span<const double> x) {
            double quad = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) quad += x[i] * inv(i, j) * x[j];
            return 0.5 * quad + offset;
        },
        true);
}

}  // namespace volflow
