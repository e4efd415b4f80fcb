#include <cmath>

#include <gtest/gtest.h>

#include "qspeed/dynamics.hpp"
#include "qspeed/oracle.hpp"

using namespace qspeed;

namespace {

ModelParams two_level(double gamma0, int n) { return ModelParams{1.0, 2.0, gamma0, n, 0.0, AtomKind::TwoLevel}; }

ModelParams v_type(double gamma0, int n, double theta)
{
    return ModelParams{1.0, 2.0, gamma0, n, theta, AtomKind::ThreeLevelV};
}

double max_gap(const ModelParams& p, int steps)
{
    const auto o = oracle::solve_collective(p, 5.0, steps);
    double gap = 0.0;
    for (std::size_t i = 0; i < o.times.size(); ++i)
        gap = std::max(gap, std::abs(o.amplitude[i] - dynamics::main_amplitude(o.times[i], p)));
    return gap;
}

} // namespace

TEST(Oracle, MatchesClosedForm)
{
    for (double g : {0.1, 1.0, 3.0})
        for (int n : {1, 8, 30}) {
            EXPECT_LT(max_gap(two_level(g, n), oracle::min_steps), 1e-6);
            EXPECT_LT(max_gap(v_type(g, n, 0.5), oracle::min_steps), 1e-6);
        }
}

TEST(Oracle, FourthOrderConvergence)
{
    // single RK4 steps would give 16x; the Richardson-combined half steps
    // keep the same order with a smaller constant
    const auto p = two_level(3.0, 8);
    const double coarse = max_gap(p, 4096);
    const double fine = max_gap(p, 8192);
    ASSERT_GT(fine, 0.0);
    EXPECT_GT(coarse / fine, 12.0);
    EXPECT_LT(coarse / fine, 20.0);
}

TEST(Oracle, SatisfiesSecondOrderIdentity)
{
    // s'' = -lambda s' - (w N) s for the exponential kernel
    const auto p = two_level(2.0, 3);
    const auto k = oracle::channel_kernel(p);
    const int steps = 1 << 14;
    const auto sol = oracle::integrate_channel(k, p.n_atoms, 1.0, 5.0, steps);
    const double h = 5.0 / steps;
    for (int i = 100; i < steps; i += 997) {
        const cplx d1 = (sol.s[i + 1] - sol.s[i - 1]) / (2.0 * h);
        const cplx d2 = (sol.s[i + 1] - 2.0 * sol.s[i] + sol.s[i - 1]) / (h * h);
        EXPECT_NEAR(std::abs(d2 + k.decay * d1 + k.weight * p.n_atoms * sol.s[i]), 0.0, 1e-5);
    }
    EXPECT_LT(sol.max_local_error, oracle::max_local_error);
}

TEST(Oracle, ZeroCouplingIsStationary)
{
    const auto o = oracle::solve_collective(two_level(0.0, 4), 5.0, oracle::min_steps);
    for (const auto& a : o.amplitude)
        EXPECT_EQ(a, cplx(1.0));
}

TEST(Oracle, FullInterferenceDoublesCoupling)
{
    const auto v = oracle::solve_collective(v_type(1.2, 3, 1.0), 5.0, oracle::min_steps);
    const auto t = oracle::solve_collective(two_level(2.4, 3), 5.0, oracle::min_steps);
    for (std::size_t i = 0; i < v.times.size(); i += 64)
        EXPECT_NEAR(v.population[i], t.population[i], 1e-12);
}

TEST(Oracle, RejectsCoarseGrids)
{
    EXPECT_THROW(oracle::solve_collective(two_level(1.0, 1), 5.0, 1024), std::invalid_argument);
    EXPECT_THROW(oracle::validate(oracle::KernelSpec{-1.0, 1.0}), std::invalid_argument);
}

TEST(Oracle, FlagsUnderResolvedSteps)
{
    // a very stiff channel on the minimum grid trips the local-error check
    const oracle::KernelSpec k{1e4, 2.0};
    EXPECT_THROW(oracle::integrate_channel(k, 30, 1.0, 50.0, oracle::min_steps), oracle::StepSizeFailure);
}
