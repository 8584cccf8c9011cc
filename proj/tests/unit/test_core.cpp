#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <volflow/body.hpp>
#include <volflow/densities.hpp>
#include <volflow/exponents.hpp>
#include <volflow/gaussian.hpp>
#include <volflow/grid.hpp>
#include <volflow/log_density.hpp>

using namespace volflow;

TEST(Grid, OneDimensionalSpacingAndCenter) {
    const GridSpec g = make_grid(1, 8.0, 257);
    EXPECT_EQ(g.spacing(0), 0.0625);
    EXPECT_EQ(g.center(0), 128);
    EXPECT_EQ(g.coord(0, 128), 0.0);
    EXPECT_EQ(g.coord(0, 0), -8.0);
    EXPECT_EQ(g.coord(0, 256), 8.0);
}

TEST(Grid, TwoDimensionalShape) {
    const GridSpec g = make_grid(2, 6.0, 129);
    EXPECT_EQ(g.total(), 129u * 129u);
    EXPECT_EQ(g.spacing(0), 0.09375);
    EXPECT_EQ(g.spacing(1), 0.09375);
    EXPECT_EQ(g.stride(0), 129u);
    EXPECT_EQ(g.stride(1), 1u);
}

TEST(Grid, RejectsBadInput) {
    EXPECT_THROW(make_grid(1, 8.0, 256), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 8.0, 1), std::invalid_argument);
    EXPECT_THROW(make_grid(1, -1.0, 33), std::invalid_argument);
    EXPECT_THROW(make_grid(4, 1.0, 33), std::invalid_argument);
    EXPECT_THROW(make_grid(0, 1.0, 33), std::invalid_argument);
}

TEST(Grid, MirrorIsExactReflection) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 + static_cast<int>(rng() % 3);
        const int n = 2 * static_cast<int>(rng() % 10) + 3;
        const GridSpec g = make_grid(dim, 0.1 + (rng() % 100) * 0.37, n);
        for (std::size_t i = 0; i < g.total(); ++i) {
            const auto x = g.node(i), y = g.node(g.mirror(i));
            for (int k = 0; k < dim; ++k) ASSERT_EQ(x[k], -y[k]);
            ASSERT_EQ(g.mirror(g.mirror(i)), i);
        }
    }
}

TEST(Grid, RavelUnravelRoundTrip) {
    const GridSpec g = make_grid(3, 1.0, 7);
    for (std::size_t i = 0; i < g.total(); ++i) EXPECT_EQ(g.ravel(g.unravel(i)), i);
}

TEST(LogDensity, RejectsMalformedValues) {
    const GridSpec g = make_grid(1, 1.0, 5);
    EXPECT_THROW(LogDensity(g, {0, 0, std::nan(""), 0, 0}, false), std::invalid_argument);
    EXPECT_THROW(LogDensity(g, {0, 0, -INFINITY, 0, 0}, false), std::invalid_argument);
    EXPECT_THROW(LogDensity(g, std::vector<double>(5, INFINITY), false), std::invalid_argument);
    EXPECT_THROW(LogDensity(g, {0, 0, 0}, false), std::invalid_argument);
    EXPECT_THROW(LogDensity(g, {1, 0, 0, 0, 0}, true), std::invalid_argument);
    EXPECT_NO_THROW(LogDensity(g, {INFINITY, 1, 0, 1, INFINITY}, true));
}

TEST(LogDensity, EvennessCheck) {
    const GridSpec g = make_grid(1, 2.0, 33);
    const auto even = LogDensity::from_function(g, [](std::span<const double> x) { return 0.5 * x[0] * x[0]; }, false);
    const auto odd = LogDensity::from_function(g, [](std::span<const double> x) { return 0.5 * x[0] * x[0] + x[0]; }, false);
    EXPECT_TRUE(check_even(even));
    EXPECT_FALSE(check_even(odd));
    EXPECT_EQ(odd_defect(g, even.phi()), 0.0);
    EXPECT_NEAR(odd_defect(g, odd.phi()), 4.0, 1e-12);
}

TEST(LogDensity, ScaledShiftsPhi) {
    const GridSpec g = make_grid(1, 1.0, 5);
    const LogDensity f(g, {INFINITY, 1, 0, 1, INFINITY}, true);
    const LogDensity h = f.scaled(std::log(2.0));
    EXPECT_EQ(h.phi(0), INFINITY);
    EXPECT_DOUBLE_EQ(h.phi(2), -std::log(2.0));
    EXPECT_TRUE(h.even());
}

TEST(Gaussian, PhiAtOrigin) {
    const GridSpec g = make_grid(1, 8.0, 257);
    const LogDensity f = gaussian_to_logdensity(GaussianSpec::isotropic(1, 1.0), g);
    EXPECT_NEAR(f.phi(128), 0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
    EXPECT_TRUE(f.even());
}

TEST(Gaussian, RejectsNonPositiveDefinite) {
    Eigen::MatrixXd a(2, 2);
    a << 1.0, 2.0, 2.0, 1.0;
    EXPECT_THROW(GaussianSpec::make(1.0, a), std::invalid_argument);
    EXPECT_THROW(GaussianSpec::isotropic(1, 1.0, -1.0), std::invalid_argument);
}

TEST(Exponents, EndpointPairIsHolderConjugate) {
    for (double s : {0.05, 0.2, 0.5 * std::numbers::ln2, 1.0, 3.0}) {
        const auto e = ExponentSchedule::endpoint(s);
        EXPECT_NEAR(1.0 / e.p + 1.0 / e.q, 1.0, 1e-12);
        EXPECT_GT(e.p, 0.0);
        EXPECT_LT(e.q, 0.0);
        EXPECT_NEAR(e.holder_conjugate_p(), e.q, 1e-12 * std::fabs(e.q));
    }
    const auto half = ExponentSchedule::endpoint(0.5 * std::numbers::ln2);
    EXPECT_NEAR(half.p, 0.5, 1e-15);
    EXPECT_NEAR(half.q, -1.0, 1e-15);
}

TEST(Exponents, NelsonThreshold) {
    EXPECT_NEAR(nelson_q(1.0, 0.5), 1.0 - std::exp(2.0) / 2.0, 1e-14);
    // the endpoint p puts the threshold at 0
    for (double s : {0.1, 0.7}) EXPECT_NEAR(nelson_q(s, ExponentSchedule::endpoint(s).p), 0.0, 1e-12);
}

TEST(Body, GaugesOfUnitBalls) {
    const double x[2] = {0.3, -0.4};
    EXPECT_NEAR(BodySpec::lp_ball(2, 2.0).gauge(x), 0.5, 1e-15);
    EXPECT_NEAR(BodySpec::lp_ball(2, 1.0).gauge(x), 0.7, 1e-15);
    EXPECT_NEAR(BodySpec::lp_ball(2, INFINITY).gauge(x), 0.4, 1e-15);
    EXPECT_NEAR(BodySpec::lp_ball(2, 2.0, 2.0).gauge(x), 0.25, 1e-15);
    EXPECT_NEAR(BodySpec::lp_ball(2, 1.0).extent(0), 1.0, 1e-15);
    Eigen::MatrixXd a(2, 2);
    a << 4.0, 0.0, 0.0, 1.0;
    EXPECT_NEAR(BodySpec::ellipsoid(a).extent(0), 2.0, 1e-12);
}

TEST(Densities, BatteryIsEvenAndLabelled) {
    const GridSpec g1 = make_grid(1, 8.0, 129), g2 = make_grid(2, 6.0, 33);
    EXPECT_EQ(battery(1).size(), 6u);
    EXPECT_EQ(battery(2).size(), 1u);
    for (const auto& spec : battery(1)) {
        const LogDensity f = make_density(spec, g1);
        EXPECT_TRUE(f.even()) << spec.label();
        EXPECT_TRUE(check_even(f)) << spec.label();
    }
    EXPECT_TRUE(check_even(make_density(battery(2)[0], g2)));
}

TEST(Densities, BoxEdgeNodesCarryHalfWeight) {
    const GridSpec g = make_grid(1, 2.0, 9);  // nodes at 0, +-0.5, +-1, ...
    const LogDensity f = make_density({"box", {{"a", 1.0}}}, g);
    EXPECT_EQ(f.phi(4), 0.0);
    EXPECT_NEAR(f.phi(2), std::log(2.0), 1e-15);
    EXPECT_EQ(f.phi(1), INFINITY);
}

TEST(Densities, UnknownFamilyAndWrongDimension) {
    const GridSpec g = make_grid(1, 1.0, 9);
    EXPECT_THROW(make_density({"nope", {}}, g), std::invalid_argument);
    EXPECT_THROW(make_density({"cross", {}}, g), std::invalid_argument);
}

TEST(Densities, MassParameterScales) {
    const GridSpec g = make_grid(1, 8.0, 129);
    const LogDensity a = make_density({"exp_power", {{"alpha", 1.5}}}, g);
    const LogDensity b = make_density({"exp_power", {{"alpha", 1.5}, {"mass", 3.0}}}, g);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.phi(i) - b.phi(i), std::log(3.0), 1e-12);
}
