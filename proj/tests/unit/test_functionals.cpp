#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <volflow/densities.hpp>
#include <volflow/functionals.hpp>
#include <volflow/gaussian.hpp>
#include <volflow/heatflow.hpp>
#include <volflow/oracles/oracles.hpp>
#include <volflow/quadrature.hpp>

using namespace volflow;

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);
const double kHalfLn2 = 0.5 * std::log(2.0);

GridSpec grid1() { return make_grid(1, 8.0, 513); }

}  // namespace

TEST(VolumeProduct, GaussianIn1DAnd2D) {
    EXPECT_NEAR(volume_product(make_density({"gaussian", {}}, grid1())).log_abs, kLog2Pi, 1e-12);
    EXPECT_NEAR(volume_product(make_density({"gaussian", {}}, make_grid(2, 6.0, 129))).log_abs, 2 * kLog2Pi, 1e-7);
}

TEST(VolumeProduct, InvariantUnderMassAndLinearMaps) {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const GridSpec g = make_grid(1, 10.0, 641);
    const double base = volume_product(make_density({"exp_power", {{"alpha", 3.0}}}, g)).log_abs;
    for (int k = 0; k < 8; ++k) {
        const double scale = 0.7 + 0.8 * u(rng), mass = 0.1 + 5.0 * u(rng);
        const auto f = make_density({"exp_power", {{"alpha", 3.0}, {"scale", scale}, {"mass", mass}}}, g);
        EXPECT_NEAR(volume_product(f).log_abs, base, 2e-3) << scale << " " << mass;
    }
}

TEST(VolumeProduct, BatteryBelowGaussian) {
    for (const auto& spec : battery(1)) {
        const double v = volume_product(make_density(spec, grid1())).log_abs;
        EXPECT_LE(v, kLog2Pi + 5e-3) << spec.label();
    }
}

TEST(VolumeProduct, ExponentialIsFour) {
    const auto f = make_density({"exp_power", {{"alpha", 1.0}}}, grid1());
    EXPECT_NEAR(std::exp(volume_product(f).log_abs), 4.0, 1e-2);
}

TEST(Constants, CsMatchesClosedForm) {
    for (double s : {0.1, kHalfLn2, 1.0})
        for (int n : {1, 2}) {
            const double want = oracles::gaussian_closed_forms("c_s", {{"s", s}, {"n", n}}).log_abs;
            EXPECT_NEAR(log_c_s(s, n), want, 1e-13);
        }
}

TEST(Exponents, EndpointPairIsConjugate) {
    for (double s : {0.05, 0.3, 1.0, 3.0}) {
        const auto e = ExponentSchedule::endpoint(s);
        EXPECT_NEAR(1.0 / e.p + 1.0 / e.q, 1.0, 1e-12);
        EXPECT_NEAR(nelson_q(s, e.p), 0.0, 1e-12);
        EXPECT_LT(e.q, nelson_q(s, e.p));
        EXPECT_GT(e.p, 0.0);
        EXPECT_LT(e.q, 0.0);
    }
}

TEST(RevHC, GridMatchesGaussianClosedForm) {
    for (double beta : {0.5, 1.0, 2.0})
        for (double s : {0.2, kHalfLn2}) {
            const auto e = ExponentSchedule::endpoint(s);
            const auto f = make_density({"gaussian", {{"beta", beta}}}, grid1());
            const auto r = rev_hc_value(f, s, e.p, e.q);
            const double want = gaussian_rev_hc(beta, {0.0}, s, e.p, e.q).log_abs;
            EXPECT_NEAR(r.log_lhs.log_abs, want, 1e-6) << beta << " " << s;
        }
}

TEST(RevHC, GaussianEqualityAndBatterySlack) {
    const double s = kHalfLn2;
    const auto e = ExponentSchedule::endpoint(s);
    EXPECT_NEAR(rev_hc_value(make_density({"gaussian", {}}, grid1()), s, e.p, e.q).slack, 0.0, 1e-6);
    for (const auto& spec : battery(1))
        EXPECT_GE(rev_hc_value(make_density(spec, grid1()), s, e.p, e.q).slack, -1e-4) << spec.label();
}

TEST(RevHC, RejectsInadmissibleExponents) {
    const auto f = make_density({"gaussian", {}}, grid1());
    EXPECT_THROW(rev_hc_value(f, 0.3, 0.5, 0.5), std::invalid_argument);
    EXPECT_THROW(gaussian_rev_hc(-1.0, {0.0}, 0.3, 0.5, -1.0), std::invalid_argument);
    EXPECT_THROW(gaussian_rev_hc(1.0, {}, 0.3, 0.5, -1.0), std::invalid_argument);
}

TEST(RevHC, InfimumIsAtMostEverySample) {
    const std::vector<double> betas{0.5, 1.0, 4.0}, shifts{0.0, 1.0};
    const double s = 1.0, p = 0.5, q = nelson_q(s, p);
    const double inf = gaussian_rev_hc_inf(betas, shifts, 1, s, p, q).log_abs;
    for (double b : betas)
        for (double a : shifts) EXPECT_LE(inf, gaussian_rev_hc(b, {a}, s, p, q).log_abs + 1e-15);
}

TEST(Laplace, TransformOfGaussianPower) {
    const auto f = make_density({"gaussian", {}}, grid1());
    const double p = 0.5;
    const GridSpec xg = make_grid(1, 3.0, 61);
    const auto res = laplace_f_t(f, p, xg);
    for (int i = 0; i < xg.points(0); ++i) {
        const double x = xg.coord(0, i);
        const double want = oracles::gaussian_closed_forms("laplace_gamma", {{"p", p}, {"x", x}}).log_abs;
        EXPECT_NEAR(res.log_f[static_cast<std::size_t>(i)], want, 1e-9) << x;
    }
}

TEST(Laplace, NormRatioOfGaussians) {
    for (double p : {0.3, 0.5, 0.8}) {
        const double want = oracles::gaussian_closed_forms("laplace_gamma_ratio", {{"p", p}, {"n", 1}}).log_abs;
        EXPECT_NEAR(laplace_norm_ratio(make_density({"gaussian", {}}, grid1()), p).log_abs, want, 5e-3) << p;
    }
    EXPECT_THROW(laplace_norm_ratio(make_density({"gaussian", {}}, grid1()), 1.5), std::invalid_argument);
}

TEST(Laplace, RoutesAgreeOnGaussians) {
    const auto e = equiv_form_check(make_density({"gaussian", {{"beta", 2.0}}}, grid1()), 0.3);
    EXPECT_NEAR(e.ou_route.log_abs, e.laplace_route.log_abs, 1e-3);
}

TEST(QFunctional, GaussianIsStationaryInTime) {
    const auto pts = q_functional(make_density({"gaussian", {}}, grid1()), kHalfLn2, {0.0, 0.2, 1.0});
    ASSERT_EQ(pts.size(), 3u);
    for (const auto& p : pts) EXPECT_NEAR(p.value, pts.front().value, 1e-6) << p.t;
}

TEST(QFunctional, BoxIncreases) {
    const auto pts = q_functional(make_density({"box", {}}, grid1()), kHalfLn2, {0.1, 0.3, 0.9});
    for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_GE(pts[k].value, pts[k - 1].value - 1e-4);
    EXPECT_THROW(q_functional(make_density({"box", {}}, grid1()), kHalfLn2, {0.3, 0.1}), std::invalid_argument);
}

TEST(BrascampLieb, EndpointConstantInvertsCs) {
    for (double s : {0.2, kHalfLn2, 1.0}) {
        const auto bl = gaussian_bl_constant(endpoint_bl_data(s, 1));
        ASSERT_FALSE(bl.degenerate);
        EXPECT_NEAR(bl.value.log_abs + log_c_s(s, 1), 0.0, 1e-3) << s;
    }
}

TEST(BrascampLieb, GridIntegralMatchesObjective) {
    const BLData d = endpoint_bl_data(kHalfLn2, 1);
    const std::vector<double> a1{0.8}, a2{1.7};
    const auto f1 = gaussian_to_logdensity(GaussianSpec::isotropic(1, a1[0]), grid1());
    const auto f2 = gaussian_to_logdensity(GaussianSpec::isotropic(1, a2[0]), grid1());
    EXPECT_NEAR(bl_integral(f1, f2, d).log_abs, bl_gaussian_objective(d, a1, a2), 1e-2);
    EXPECT_THROW(bl_gaussian_objective(d, {1.0, 1.0}, a2), std::invalid_argument);
}

TEST(BrascampLieb, QuadraticFormBlocks) {
    const BLData d = endpoint_bl_data(0.4, 2);
    ASSERT_EQ(d.qform.rows(), 4);
    EXPECT_EQ(d.qform(0, 0), d.q11);
    EXPECT_EQ(d.qform(1, 3), d.q12);
    EXPECT_EQ(d.qform(3, 3), d.q22);
    EXPECT_EQ(d.qform(0, 1), 0.0);
}

TEST(LrVolume, AgreesWithStripReferences) {
    LrOptions opt;
    opt.rows = 201;
    opt.outer_spacing = 0.3;
    for (double r : {1.0, 2.0}) {
        EXPECT_NEAR(std::exp(lr_volume_product(BodySpec::lp_ball(2, kInf), r, opt).log_abs) / oracles::lr_square(r), 1.0,
                    5e-3);
        EXPECT_NEAR(std::exp(lr_volume_product(BodySpec::lp_ball(2, 2.0), r, opt).log_abs) / oracles::lr_disk(r), 1.0,
                    5e-3);
    }
    EXPECT_THROW(lr_volume_product(BodySpec::lp_ball(2, 2.0), 0.0, opt), std::invalid_argument);
}

TEST(Tropical, GaussianBridgeIsExact) {
    const auto curve = tropical_limit_curve(make_density({"gaussian", {}}, grid1()), {0.4, 0.2, 0.1});
    ASSERT_FALSE(curve.truncated);
    for (const auto& p : curve.points) EXPECT_NEAR(p.log_bridge, kLog2Pi, 1e-9) << p.s;
    EXPECT_THROW(tropical_limit_curve(make_density({"gaussian", {}}, grid1()), {0.1, 0.2}), std::invalid_argument);
}

TEST(Tropical, TooSmallTimeTruncates) {
    const auto curve = tropical_limit_curve(make_density({"gaussian", {}}, make_grid(1, 8.0, 65)), {0.4, 1e-4});
    EXPECT_TRUE(curve.truncated);
    EXPECT_EQ(curve.points.size(), 1u);
}
