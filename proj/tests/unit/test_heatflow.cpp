#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <volflow/densities.hpp>
#include <volflow/gaussian.hpp>
#include <volflow/heatflow.hpp>
#include <volflow/oracles/oracles.hpp>
#include <volflow/quadrature.hpp>

using namespace volflow;

namespace {

double log_mass(const LogDensity& f) { return log_integral(f).log_abs; }

double second_moment(const LogDensity& f) {
    const GridSpec& g = f.grid();
    double m = 0.0, w = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double e = std::exp(-f.phi(i));
        const auto x = g.node(i);
        m += x[0] * x[0] * e;
        w += e;
    }
    return m / w;
}

// even two-bump mixture with random widths and offset
LogDensity random_mixture(std::mt19937& rng, const GridSpec& g) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = 1.5 * u(rng), b1 = 0.2 + 0.8 * u(rng), b2 = 0.2 + 1.5 * u(rng);
    return LogDensity::from_function(
        g,
        [=](std::span<const double> x) {
            const double l = -0.5 * (x[0] - a) * (x[0] - a) / b1, r = -0.5 * (x[0] + a) * (x[0] + a) / b1;
            const double c = -0.5 * x[0] * x[0] / b2;
            const double m = std::max({l, r, c});
            return -(m + std::log(std::exp(l - m) + std::exp(r - m) + std::exp(c - m)));
        },
        true);
}

}  // namespace

TEST(Heatflow, GaussianVarianceLaw) {
    // wide enough that no backward trajectory from |x| <= 4 leaves the box
    const GridSpec g = make_grid(1, 16.0, 641);
    for (double beta : {0.25, 1.0, 3.0}) {
        const LogDensity f0 = gaussian_to_logdensity(GaussianSpec::isotropic(1, beta), g);
        for (double t : {0.05, 0.3, 1.0, 2.5}) {
            const double var = std::exp(oracles::gaussian_closed_forms("fp_variance_law", {{"beta", beta}, {"t", t}}).log_abs);
            const LogDensity want = gaussian_to_logdensity(GaussianSpec::isotropic(1, var), g);
            const LogDensity ft = fp_evolve(f0, t);
            for (std::size_t i = 0; i < ft.size(); ++i) {
                const double x = g.coord(0, static_cast<int>(i));
                if (std::fabs(x) > 4.0) continue;
                ASSERT_NEAR(ft.phi(i), want.phi(i), 1e-9) << "beta " << beta << " t " << t << " x " << x;
            }
        }
    }
}

TEST(Heatflow, TwoDimensionalGaussian) {
    const GridSpec g = make_grid(2, 8.0, 129);
    Eigen::MatrixXd a(2, 2);
    a << 2.0, 0.0, 0.0, 0.5;
    const LogDensity f0 = gaussian_to_logdensity(GaussianSpec::make(1.0, a), g);
    const double t = 0.4, e = std::exp(-2.0 * t);
    Eigen::MatrixXd at = e * a + (1.0 - e) * Eigen::MatrixXd::Identity(2, 2);
    const LogDensity want = gaussian_to_logdensity(GaussianSpec::make(1.0, at), g);
    const LogDensity ft = fp_evolve(f0, t);
    for (std::size_t i = 0; i < ft.size(); ++i) {
        const auto x = g.node(i);
        if (std::hypot(x[0], x[1]) > 3.0) continue;
        ASSERT_NEAR(ft.phi(i), want.phi(i), 1e-8);
    }
}

TEST(Heatflow, ZeroTimeIsIdentityAndNegativeThrows) {
    const GridSpec g = make_grid(1, 4.0, 65);
    const LogDensity f0 = make_density({"box", {}}, g);
    const LogDensity same = fp_evolve(f0, 0.0);
    EXPECT_TRUE(std::equal(same.phi().begin(), same.phi().end(), f0.phi().begin()));
    EXPECT_THROW(fp_evolve(f0, -0.1), std::invalid_argument);
    EXPECT_THROW(ou_apply(f0, 0.0), std::invalid_argument);
}

TEST(Heatflow, NarrowKernelIsRejected) {
    const GridSpec g = make_grid(1, 8.0, 65);
    EXPECT_THROW(flow_kernel(FlowKernel::Kind::fokker_planck, 1e-4, g, 0), UnderResolvedKernel);
    const LogDensity f0 = make_density({"gaussian", {}}, g);
    EXPECT_THROW(fp_evolve(f0, 1e-4), UnderResolvedKernel);
}

TEST(Heatflow, KernelsAreCached) {
    const GridSpec g = make_grid(1, 8.0, 129);
    const auto a = flow_kernel(FlowKernel::Kind::fokker_planck, 0.37, g, 0);
    const auto b = flow_kernel(FlowKernel::Kind::fokker_planck, 0.37, g, 0);
    const auto c = flow_kernel(FlowKernel::Kind::ornstein_uhlenbeck, 0.37, g, 0);
    EXPECT_EQ(a.get(), b.get());
    EXPECT_NE(a.get(), c.get());
}

TEST(Heatflow, TrajectoryNeedsIncreasingPositiveTimes) {
    const GridSpec g = make_grid(1, 8.0, 129);
    const LogDensity f0 = make_density({"gaussian", {}}, g);
    EXPECT_THROW(flow_trajectory(f0, {0.5, 0.2}), std::invalid_argument);
    EXPECT_THROW(flow_trajectory(f0, {0.0, 0.2}), std::invalid_argument);
    const auto traj = flow_trajectory(f0, {0.1, 0.2, 0.4});
    ASSERT_EQ(traj.size(), 3u);
    const LogDensity direct = fp_evolve(f0, 0.2);
    EXPECT_TRUE(std::equal(direct.phi().begin(), direct.phi().end(), traj[1].phi().begin()));
}

TEST(Heatflow, OuOnExponentials) {
    const GridSpec g = make_grid(1, 12.0, 481);
    for (double a : {-0.7, 0.3, 1.2}) {
        const LogDensity e = LogDensity::from_function(g, [a](std::span<const double> y) { return -a * y[0]; }, false);
        for (double s : {0.1, 0.5, 1.5}) {
            const LogDensity out = ou_apply(e, s);
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double x = g.coord(0, static_cast<int>(i));
                if (std::fabs(x) > 3.0) continue;
                const double want = oracles::gaussian_closed_forms("ou_exponential", {{"a", a}, {"s", s}, {"x", x}}).log_abs;
                ASSERT_NEAR(-out.phi(i), want, 1e-9) << a << " " << s << " " << x;
            }
        }
    }
}

TEST(HeatflowProperty, MassEvennessAndMoments) {
    std::mt19937 rng(31337);
    const GridSpec g = make_grid(1, 10.0, 401);
    for (int trial = 0; trial < 20; ++trial) {
        const LogDensity f0 = random_mixture(rng, g);
        const double m0 = second_moment(f0);
        const double lm0 = log_mass(f0);
        for (double t : {0.1, 0.6, 1.7}) {
            const LogDensity ft = fp_evolve(f0, t);
            ASSERT_TRUE(ft.even());
            ASSERT_EQ(odd_defect(g, ft.phi()), 0.0);
            ASSERT_NEAR(log_mass(ft), lm0, 1e-9);
            ASSERT_NEAR(second_moment(ft), oracles::moment_ode_rk4(m0, t), 1e-8) << trial << " " << t;
        }
    }
}

TEST(HeatflowProperty, Semigroup) {
    std::mt19937 rng(4);
    const GridSpec g = make_grid(1, 10.0, 401);
    for (int trial = 0; trial < 10; ++trial) {
        const LogDensity f0 = random_mixture(rng, g);
        const LogDensity two = fp_evolve(fp_evolve(f0, 0.3), 0.5);
        const LogDensity one = fp_evolve(f0, 0.8);
        for (std::size_t i = 0; i < one.size(); ++i) {
            if (std::fabs(g.coord(0, static_cast<int>(i))) > 4.0) continue;
            ASSERT_NEAR(two.phi(i), one.phi(i), 1e-8);
        }
    }
}

TEST(HeatflowProperty, OrderPreserving) {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const GridSpec g = make_grid(1, 6.0, 193);
    for (int trial = 0; trial < 10; ++trial) {
        const LogDensity f = random_mixture(rng, g);
        std::vector<double> bigger(f.phi().begin(), f.phi().end());
        for (std::size_t i = 0; i < bigger.size(); ++i) {
            const std::size_t j = g.mirror(i);
            if (j < i) bigger[i] = bigger[j];
            else bigger[i] -= u(rng);
        }
        const LogDensity fb(g, bigger, true);
        const LogDensity a = fp_evolve(f, 0.4), b = fp_evolve(fb, 0.4);
        for (std::size_t i = 0; i < a.size(); ++i) ASSERT_LE(b.phi(i), a.phi(i) + 1e-12);
    }
}
