#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <volflow/densities.hpp>
#include <volflow/gaussian.hpp>
#include <volflow/oracles/oracles.hpp>

using namespace volflow;
using namespace volflow::oracles;

// Reference numbers below come from adaptive quadrature (scipy.integrate.quad)
// of the defining integrals.

TEST(ClosedForms, TruncatedGaussian) {
    EXPECT_NEAR(gaussian_closed_forms("truncated_gaussian", {{"beta", 1.0}, {"R", 1.0}}).log_abs, -0.38171514630212616, 1e-13);
    EXPECT_NEAR(gaussian_closed_forms("truncated_gaussian", {{"beta", 3.0}, {"R", 2.0}}).log_abs, -0.285302344904057, 1e-13);
}

TEST(ClosedForms, LaplaceOfGaussianPower) {
    EXPECT_NEAR(gaussian_closed_forms("laplace_gamma", {{"p", 0.5}, {"x", 0.8}}).log_abs, -0.6255121234846449, 1e-11);
}

TEST(ClosedForms, GaussianLqNorm) {
    EXPECT_NEAR(gaussian_closed_forms("gaussian_lq_norm", {{"beta", 2.0}, {"q", 0.5}, {"n", 1}}).log_abs,
                1.9586593040445903, 1e-11);
    // in n dimensions the log norm is additive
    const double one = gaussian_closed_forms("gaussian_lq_norm", {{"beta", 2.0}, {"q", 0.5}, {"n", 1}}).log_abs;
    EXPECT_NEAR(gaussian_closed_forms("gaussian_lq_norm", {{"beta", 2.0}, {"q", 0.5}, {"n", 3}}).log_abs, 3 * one, 1e-12);
}

TEST(ClosedForms, OuExponential) {
    EXPECT_NEAR(gaussian_closed_forms("ou_exponential", {{"a", 0.7}, {"s", 0.3}, {"x", 1.1}}).log_abs, 0.6809711790818864,
                1e-12);
}

TEST(ClosedForms, VolumeOfGaussianAndVarianceLaw) {
    EXPECT_NEAR(gaussian_closed_forms("v_gamma", {{"n", 2}}).log_abs, 2 * std::log(2 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(gaussian_closed_forms("fp_variance_law", {{"beta", 1.0}, {"t", 0.7}}).log_abs, 0.0, 1e-15);
    EXPECT_NEAR(std::exp(gaussian_closed_forms("fp_variance_law", {{"beta", 3.0}, {"t", 0.5}}).log_abs),
                1.0 + 2.0 * std::exp(-1.0), 1e-14);
}

TEST(ClosedForms, UnknownNameThrows) {
    EXPECT_THROW(gaussian_closed_forms("nope", {}), std::invalid_argument);
}

TEST(QuadraticForms, IntegralAndDivergence) {
    QuadraticForm qf;
    qf.m = Eigen::MatrixXd::Identity(2, 2);
    EXPECT_NEAR(gaussian_form_integral(qf).log_abs, std::log(2 * std::numbers::pi), 1e-14);
    qf.m << 2.0, 0.5, 0.5, 1.0;
    qf.b = Eigen::Vector2d(1.0, -1.0);
    qf.c0 = 0.25;
    // (2 pi) det^{-1/2} exp(<b, M^{-1} b>/2 - c0); det = 1.75, <b,M^{-1}b> = 4/1.75
    const double want = std::log(2 * std::numbers::pi) - 0.5 * std::log(1.75) + 0.5 * (4.0 / 1.75) - 0.25;
    EXPECT_NEAR(gaussian_form_integral(qf).log_abs, want, 1e-13);
    qf.m << 1.0, 2.0, 2.0, 1.0;
    EXPECT_TRUE(gaussian_form_integral(qf).divergent);
}

TEST(BruteLegendre, QuadraticNodes) {
    const std::vector<double> y{-2, -1, 0, 1, 2}, phi{2, 0.5, 0, 0.5, 2}, x{-1, 0, 0.5, 1};
    const auto c = brute_legendre_1d(y, phi, x);
    EXPECT_EQ(c[0], 0.5);
    EXPECT_EQ(c[1], 0.0);
    EXPECT_EQ(c[2], 0.0);  // max(0, 0.5 - 0.5, 1 - 2)
    EXPECT_EQ(c[3], 0.5);
}

TEST(BruteLegendre, SkipsInfiniteNodes) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> y{-1, 0, 1}, phi{inf, 0.0, inf}, x{-3, 5};
    const auto c = brute_legendre_1d(y, phi, x);
    EXPECT_EQ(c[0], 0.0);
    EXPECT_EQ(c[1], 0.0);
}

TEST(FdHessian, ExactOnQuartics) {
    // fourth-order stencils are exact for polynomials of degree <= 5
    const GridSpec g = make_grid(2, 2.0, 21);
    const LogDensity f = LogDensity::from_function(
        g, [](std::span<const double> x) { return std::pow(x[0] + x[1], 4) + x[0] * x[0] * x[1]; }, false);
    const auto hs = fd_hessian(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = g.unravel(i);
        const bool inner = idx[0] >= 2 && idx[0] <= 18 && idx[1] >= 2 && idx[1] <= 18;
        if (!inner) {
            EXPECT_EQ(hs[i].size(), 0);
            continue;
        }
        const auto x = g.node(i);
        const double u = 12.0 * (x[0] + x[1]) * (x[0] + x[1]);
        ASSERT_NEAR(hs[i](0, 0), u + 2.0 * x[1], 1e-9);
        ASSERT_NEAR(hs[i](0, 1), u + 2.0 * x[0], 1e-9);
        ASSERT_NEAR(hs[i](1, 1), u, 1e-9);
    }
}

TEST(CramerRao, GaussianIsTight) {
    const GridSpec g = make_grid(2, 9.0, 145);
    Eigen::MatrixXd a(2, 2);
    a << 1.5, 0.4, 0.4, 0.8;
    const auto f = gaussian_to_logdensity(GaussianSpec::make(1.0, a), g);
    const auto [cov_inv, mean_hess] = cramer_rao_check(f);
    EXPECT_LT((cov_inv - a.inverse()).norm(), 1e-6);
    EXPECT_LT((mean_hess - a.inverse()).norm(), 1e-6);
}

TEST(Pbl, LinearTestFunctionOnGaussianIsTight) {
    const GridSpec g = make_grid(1, 10.0, 401);
    const auto f = gaussian_to_logdensity(GaussianSpec::isotropic(1, 2.0), g);
    std::vector<double> lin(g.total());
    for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = 3.0 * g.coord(0, static_cast<int>(i));
    const auto [var, bound] = pbl_check(f, lin, fd_hessian(f));
    EXPECT_NEAR(var, 18.0, 1e-6);
    EXPECT_NEAR(bound, 18.0, 1e-6);
}

TEST(Pbl, NonConvexHessianThrows) {
    const GridSpec g = make_grid(1, 2.0, 41);
    const auto f = LogDensity::from_function(g, [](std::span<const double> x) { return -x[0] * x[0]; }, true);
    std::vector<double> lin(g.total(), 0.0);
    EXPECT_THROW(pbl_check(f, lin, fd_hessian(f)), std::domain_error);
}

TEST(Tilt, AddsLinearTermAndScales) {
    const GridSpec g = make_grid(1, 2.0, 5);
    const auto f = make_density({"gaussian", {}}, g);
    const double x[1] = {0.6};
    const auto t = tilt(f, x, 0.5);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double z = g.coord(0, static_cast<int>(i));
        EXPECT_NEAR(t.phi(i), f.phi(i) / 0.5 - 0.6 * z / 0.5, 1e-14);
    }
}

TEST(FdDerivative, CentralDifference) {
    EXPECT_NEAR(fd_derivative({{0.9, std::sin(0.9)}, {1.0, std::sin(1.0)}, {1.1, std::sin(1.1)}}, 1.0), std::cos(1.0), 1e-3);
}

TEST(MomentOde, MatchesExponentialRelaxation) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int k = 0; k < 20; ++k) {
        const double m0 = u(rng), t = u(rng) / 2;
        EXPECT_NEAR(moment_ode_rk4(m0, t), 1.0 + (m0 - 1.0) * std::exp(-2.0 * t), 1e-10);
    }
}

TEST(LrGolden, SquareAndDisk) {
    EXPECT_NEAR(lr_square(1.0), 97.40909103400239, 1e-6);
    EXPECT_NEAR(lr_square(2.0), 59.06128445561118, 1e-6);
    EXPECT_NEAR(lr_square(5.0), 35.221803916067586, 1e-6);
    EXPECT_NEAR(lr_disk(1.0), 104.66598318070311, 1e-6);
    EXPECT_NEAR(lr_disk(2.0), 64.53149415131581, 1e-6);
    EXPECT_NEAR(lr_disk(5.0), 39.61692632078342, 1e-6);
}
