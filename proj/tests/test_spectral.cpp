#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qspeed/spectral.hpp"

using namespace qspeed;

namespace {

ModelParams reservoir(double gamma0, double omega0 = 1.0, double lambda = 2.0)
{
    return ModelParams{omega0, lambda, gamma0, 1, 0.0, AtomKind::TwoLevel};
}

} // namespace

TEST(Spectral, LorentzianPeaksAtOmega0)
{
    const auto p = reservoir(1.0);
    EXPECT_NEAR(spectral::lorentzian_j(1.0, p), 1.0 / (2.0 * std::numbers::pi), 1e-15);
    EXPECT_LT(spectral::lorentzian_j(0.5, p), spectral::lorentzian_j(1.0, p));
    EXPECT_LT(spectral::lorentzian_j(1.5, p), spectral::lorentzian_j(1.0, p));
    EXPECT_THROW(spectral::lorentzian_j(-0.1, p), std::invalid_argument);
}

// 30-digit reference from an independent arbitrary-precision evaluation.
TEST(Spectral, GoldenReservoirIntegral)
{
    EXPECT_NEAR(spectral::reservoir_integral(-1.0, reservoir(1.0)), 0.225933404253455336978, 1e-14);
}

TEST(Spectral, ClosedFormMatchesQuadrature)
{
    for (double g0 : {0.1, 1.0, 3.0})
        for (double lambda : {0.5, 2.0, 5.0})
            for (double e = -1e3; e <= -1e-6; e /= 3.0) {
                const auto p = reservoir(g0, 1.0, lambda);
                const double closed = spectral::reservoir_integral(e, p);
                const double quad = spectral::reservoir_integral_quadrature(e, p);
                EXPECT_NEAR(closed, quad, 1e-8 * std::abs(closed)) << "e=" << e << " lambda=" << lambda;
            }
}

TEST(Spectral, MonotoneIncreasingInEnergy)
{
    const auto p = reservoir(1.0);
    double prev = spectral::reservoir_integral(-1e4, p);
    for (double e = -1e4; e < -1e-12; e *= 0.9) {
        const double cur = spectral::reservoir_integral(e, p);
        EXPECT_GE(cur, prev) << e;
        prev = cur;
    }
    EXPECT_GT(spectral::reservoir_integral_derivative(-0.5, p), 0.0);
}

TEST(Spectral, LinearInCoupling)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 4.0);
    for (int k = 0; k < 50; ++k) {
        const double g = u(rng);
        const double e = -u(rng);
        EXPECT_NEAR(spectral::reservoir_integral(e, reservoir(g)),
                    g * spectral::reservoir_integral(e, reservoir(1.0)), 1e-14);
    }
    EXPECT_EQ(spectral::reservoir_integral(-1.0, reservoir(0.0)), 0.0);
}

TEST(Spectral, DecaysLikeTotalWeightOverEnergy)
{
    const auto p = reservoir(1.0);
    const double e = -1e9;
    EXPECT_NEAR(spectral::reservoir_integral(e, p) * -e, spectral::total_weight(p),
                1e-6 * spectral::total_weight(p));
}

TEST(Spectral, FiniteNearZero)
{
    const double v = spectral::reservoir_integral(-1e-12, reservoir(1.0));
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, spectral::reservoir_integral(-1e-6, reservoir(1.0)));
    EXPECT_TRUE(std::isfinite(spectral::reservoir_integral(-1e-300, reservoir(1.0))));
}

TEST(Spectral, RejectsNonNegativeEnergy)
{
    EXPECT_THROW(spectral::reservoir_integral(0.0, reservoir(1.0)), std::domain_error);
    EXPECT_THROW(spectral::reservoir_integral(0.5, reservoir(1.0)), std::domain_error);
    EXPECT_THROW(spectral::reservoir_integral(NAN, reservoir(1.0)), std::domain_error);
}
