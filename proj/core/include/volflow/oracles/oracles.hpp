#pragma once

// Independent reference implementations. Nothing here calls the quadrature,
// contraction or transform code of the main library.

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "volflow/legendre.hpp"
#include "volflow/log_density.hpp"
#include "volflow/log_quad.hpp"

namespace volflow::oracles {

/// exp(-1/2 <x, M x> + <b, x> - c0) over R^d.
struct QuadraticForm {
    Eigen::MatrixXd m;
    Eigen::VectorXd b;  // empty means zero
    double c0 = 0.0;

    int dim() const { return static_cast<int>(m.rows()); }
};

/// (2 pi)^{d/2} det(M)^{-1/2} exp(<b, M^{-1} b>/2 - c0); divergent when M is
/// not positive definite.
LogQuad gaussian_form_integral(const QuadraticForm& qf);

/// All-pairs conjugate max_i [x*y_i - phi_i] over finite phi_i.
std::vector<double> brute_legendre_1d(std::span<const double> y, std::span<const double> phi,
                                      std::span<const double> x);

/// All-pairs conjugate over every primal node. Primal and dual node counts
/// must each be at most 2^14.
LogDensity brute_legendre(const LogDensity& f, const DualGrid& dual);

/// Fourth-order centered differences of phi at every node. Nodes within two
/// steps of the boundary or next to an infinite value get an empty (0x0) matrix.
std::vector<Eigen::MatrixXd> fd_hessian(const LogDensity& h);

/// (Var_h g, int <grad g, H^{-1} grad g> dh / m(h)) over interior nodes, with
/// central-difference gradients. Throws std::domain_error naming the node
/// when some Hessian is not positive definite.
std::pair<double, double> pbl_check(const LogDensity& h, std::span<const double> g,
                                    const std::vector<Eigen::MatrixXd>& hessians);

/// (cov(h)^{-1}, int Hess(-log h) dh / m(h)) over interior nodes.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cramer_rao_check(const LogDensity& h);

/// The tilted density z -> e^{<x,z>/p} f(z)^{1/p} (unnormalized).
LogDensity tilt(const LogDensity& f, std::span<const double> x, double p);

/// Central difference (v+ - v-)/(2 dt) from three equally spaced samples
/// whose middle abscissa is t.
double fd_derivative(const std::vector<std::pair<double, double>>& samples, double t);

/// Named closed forms, returned as logs:
///   v_gamma              n                   log (2 pi)^n
///   fp_variance_law      beta, t             log(1 - e^{-2t} + e^{-2t} beta)
///   laplace_gamma_ratio  p, n                log ||L gamma||_{p'} - log ||gamma||_p
///   gaussian_lq_norm     beta, q, n          log ||gamma_beta||_{L^q(dx)}
///   ou_exponential       a, s, x             log P_s[e^{a y}](x)
///   laplace_gamma        p, x                log int e^{xz/p} gamma(z)^{1/p} dz
///   truncated_gaussian   beta, R             log int_{-R}^{R} gamma_beta
///   c_s                  s, n                log C_s
///   bl_endpoint          s, n                log BL at the endpoint exponents
/// Unknown names throw std::invalid_argument.
LogQuad gaussian_closed_forms(const std::string& name, const std::map<std::string, double>& params);

/// Second moment of the mass-normalized flow, m' = 2(1 - m), by classical RK4.
double moment_ode_rk4(double m0, double t, int steps = 1000);

/// L^r volume products from one-dimensional integrals (composite Simpson).
double lr_disk(double r);
double lr_square(double r);

}  // namespace volflow::oracles
