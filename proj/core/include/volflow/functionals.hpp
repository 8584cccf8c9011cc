#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "volflow/body.hpp"
#include "volflow/exponents.hpp"
#include "volflow/legendre.hpp"
#include "volflow/log_density.hpp"
#include "volflow/log_quad.hpp"

namespace volflow {

// ---- volume product -------------------------------------------------------

/// Polar tail ratios above this flag the volume product.
inline constexpr double kPolarTailFlag = 1e-4;

/// log v(f) = log int f + log int f°.
LogQuad volume_product(const LogDensity& f, const DualGrid& dual);
/// Same with fitted_dual_grid(f).
LogQuad volume_product(const LogDensity& f);

// ---- constants --------------------------------------------------------------

/// log C_s with C_s = ((2 pi)^{(1/p + 1/q')/2 - 1} / sqrt(1 - e^{-2s}))^n at
/// the endpoint exponents.
double log_c_s(double s, int dim);

/// log of the constant in the s -> 0 bridge to the volume product; chosen so
/// that centered Gaussians give exactly (2 pi)^n for every s.
double log_bridge_constant(int dim);

// ---- reverse hypercontractivity ---------------------------------------------

struct RevHCReport {
    LogQuad log_lhs;  // ||P_s[(f0/gamma)^{1/p}]||_{L^q(gamma)}
    LogQuad log_rhs;  // (int f0)^{1/p}
    double slack = 0.0;
};

RevHCReport rev_hc_value(const LogDensity& f0, double s, double p, double q);

/// Closed form of ||P_s[(gamma_beta(. + a)/gamma)^{1/p}]||_{L^q(gamma)}; a has
/// one entry per coordinate. Divergent forms are reported through the
/// divergent flag: an infinite inner integral gives +inf, an infinite outer
/// integral gives 0.
LogQuad gaussian_rev_hc(double beta, const std::vector<double>& shift, double s, double p, double q);

/// Infimum of gaussian_rev_hc over beta in betas and shifts a e_1 (a in shifts).
LogQuad gaussian_rev_hc_inf(const std::vector<double>& betas, const std::vector<double>& shifts, int dim, double s,
                            double p, double q);

// ---- Laplace-transform functionals ------------------------------------------

struct LaplaceResult {
    GridSpec x_grid;
    std::vector<double> log_f;           // log F on x_grid
    std::vector<unsigned char> boundary;  // integrand peaks on the z boundary
    std::size_t flagged_nodes = 0;
};

/// x grid on which F = L[f^{1/p}](./p) is evaluated for an L^q norm: the
/// polar-style fit with q log F falling `decay` nats.
GridSpec laplace_x_grid(const LogDensity& f, double p, double q, double decay = 40.0);

/// F(x) = int e^{<x,z>/p} f(z)^{1/p} dz.
LaplaceResult laplace_f_t(const LogDensity& f, double p, const GridSpec& x_grid);

struct QPoint {
    double t = 0.0;
    double value = 0.0;  // Q_s(t) = log int F_t^q dx
    double tail_ratio = 0.0;
    bool flagged = false;
};

/// Q_s(t) for each time, with f_t = P_t^* f0 (t = 0 uses f0). A single x grid,
/// fitted to every f_t, is shared by all times.
std::vector<QPoint> q_functional(const LogDensity& f0, double s, const std::vector<double>& times);

struct EquivForm {
    LogQuad ou_route;       // log ||P_s[(f/gamma)^{1/p}]||^q_{L^q(gamma)}
    LogQuad laplace_route;  // log (C_s^q e^{ns} int F^q dx)
};

EquivForm equiv_form_check(const LogDensity& f, double s);

/// log ||L f||_{L^q(dx)} - log ||f||_{L^p(dx)} with q = p/(p-1).
LogQuad laplace_norm_ratio(const LogDensity& f, double p);

// ---- inverse Brascamp-Lieb ----------------------------------------------------

/// Two-function Gaussian-kernel data. qform is the 2n x 2n matrix Q_s; because
/// its blocks are multiples of the identity, the scalars q11, q12, q22 carry
/// all of it.
struct BLData {
    ExponentSchedule exponents;
    int dim = 1;
    double q11 = 0.0, q12 = 0.0, q22 = 0.0;
    Eigen::MatrixXd qform;
};

BLData make_bl_data(double s, double p, double q, int dim);
BLData endpoint_bl_data(double s, int dim);

/// int exp(-pi <x, Q x>) f1(x1)^{c1} f2(x2)^{c2} dx1 dx2 on f1 and f2's grids.
LogQuad bl_integral(const LogDensity& f1, const LogDensity& f2, const BLData& data);

struct BLConstant {
    LogQuad value;             // log BL_s; zero when degenerate
    double boundary_log = 0.0;  // smallest objective seen (log)
    std::vector<double> a1, a2;
    bool degenerate = false;
};

/// Objective for diagonal covariances: log int e^{-pi<x,Qx>} prod gamma_{A_i}^{c_i}.
double bl_gaussian_objective(const BLData& data, const std::vector<double>& a1, const std::vector<double>& a2);

/// Infimum over diagonal A1, A2 > 0 by cyclic golden-section search in log
/// coordinates on [-log_box, log_box].
BLConstant gaussian_bl_constant(const BLData& data, double log_box = 12.0, double rel_tol = 1e-8);

// ---- L^r volume product -------------------------------------------------------

struct LrOptions {
    int rows = 801;             // strips across K for the inner integral
    double outer_spacing = 0.2;
    double decay = 45.0;        // outer box reaches this many nats of decay
};

/// M_r(K) = |K| int (avg_K e^{r<x,y>})^{-1/r} dx for n = 2. The inner integral
/// is exact along strips of K and a midpoint sum across them; the outer one
/// is a trapezoid sum over a square box.
LogQuad lr_volume_product(const BodySpec& k, double r, const LrOptions& opt = {});

// ---- s -> 0 bridge --------------------------------------------------------------

struct TropicalPoint {
    double s = 0.0;
    double log_bridge = 0.0;
    double tail_ratio = 0.0;
    bool flagged = false;
};

struct TropicalCurve {
    std::vector<TropicalPoint> points;
    bool truncated = false;  // a kernel was too narrow for the grid
};

/// (2 pi)^n (int f)^{-q/p} ||P_s[(f/gamma)^{1/p}]||^q_{L^q(gamma)} at the
/// endpoint exponents of each s.
TropicalCurve tropical_limit_curve(const LogDensity& f, const std::vector<double>& s_list);

}  // namespace volflow
