#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qspeed/measures.hpp"

using namespace qspeed;

namespace {

ModelParams two_level(double gamma0, int n) { return ModelParams{1.0, 2.0, gamma0, n, 0.0, AtomKind::TwoLevel}; }

ModelParams v_type(double gamma0, int n, double theta)
{
    return ModelParams{1.0, 2.0, gamma0, n, theta, AtomKind::ThreeLevelV};
}

DensityMatrix pure2(cplx a, cplx b)
{
    DensityMatrix r;
    r.entries.resize(2, 2);
    r.entries << a * std::conj(a), a * std::conj(b), b * std::conj(a), b * std::conj(b);
    return r;
}

} // namespace

TEST(Measures, SchattenNormsOfDiagonal)
{
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 3.0;
    m(1, 1) = -4.0;
    EXPECT_NEAR(measures::schatten_norm(m, 1.0), 7.0, 1e-14);
    EXPECT_NEAR(measures::schatten_norm(m, 2.0), 5.0, 1e-14);
    EXPECT_NEAR(measures::schatten_norm(m, measures::infinity), 4.0, 1e-14);
    EXPECT_THROW(measures::schatten_norm(m, 3.0), std::invalid_argument);
}

TEST(Measures, SchattenNormOrdering)
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> u;
    for (int k = 0; k < 200; ++k) {
        ComplexMatrix m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m(i, j) = cplx(u(rng), u(rng));
        const double n1 = measures::schatten_norm(m, 1.0);
        const double n2 = measures::schatten_norm(m, 2.0);
        const double ni = measures::schatten_norm(m, measures::infinity);
        EXPECT_GE(n1, n2 - 1e-12);
        EXPECT_GE(n2, ni - 1e-12);
        EXPECT_NEAR(n2, m.norm(), 1e-12);
    }
}

TEST(Measures, BuresAngleAndTraceDistance)
{
    const auto up = pure2(1.0, 0.0);
    const auto down = pure2(0.0, 1.0);
    const auto plus = pure2(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2);
    EXPECT_NEAR(measures::bures_angle(up, up), 0.0, 1e-7);
    EXPECT_NEAR(measures::bures_angle(up, down), std::numbers::pi / 2, 1e-14);
    EXPECT_NEAR(measures::bures_angle(up, plus), std::numbers::pi / 4, 1e-14);
    EXPECT_NEAR(measures::trace_distance(up, down), 1.0, 1e-14);
    EXPECT_NEAR(measures::trace_distance(up, plus), std::numbers::sqrt2 / 2, 1e-14);

    DensityMatrix mixed;
    mixed.entries = 0.5 * ComplexMatrix::Identity(2, 2);
    EXPECT_THROW(measures::bures_angle(mixed, up), std::invalid_argument);
}

TEST(Measures, GenericBoundMatchesClosedForm)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ug(0.1, 4.0), ut(1.0, 8.0);
    std::uniform_int_distribution<int> un(1, 30);
    for (int k = 0; k < 10; ++k) {
        const auto p = two_level(ug(rng), un(rng));
        const double tau = ut(rng);
        const auto closed = measures::qsl_two_level(p, tau);
        const auto gen = measures::qsl_generic(measures::make_state_trajectory(p, tau), tau);
        EXPECT_NEAR(gen.tau_qsl, closed.tau_qsl, 1e-6 * closed.tau_qsl) << "gamma0=" << p.gamma0 << " N=" << p.n_atoms;
        // the operator norm gives the smallest speed and so the binding bound
        EXPECT_GE(gen.speed[0], gen.speed[1]);
        EXPECT_GE(gen.speed[1], gen.speed[2]);
    }
}

TEST(Measures, GenericBoundFromSnapshotsOnly)
{
    const auto p = two_level(2.0, 3);
    auto tr = measures::make_state_trajectory(p, 5.0, 0.0, 1 << 14, false);
    const auto closed = measures::qsl_two_level(p, 5.0);
    EXPECT_NEAR(measures::qsl_generic(tr, 5.0).tau_qsl, closed.tau_qsl, 1e-4 * closed.tau_qsl);
}

TEST(Measures, GenericBoundWithGroundAdmixture)
{
    const cplx g0 = 0.6;
    const auto p = two_level(2.0, 3);
    const auto q = measures::qsl_generic(measures::make_state_trajectory(p, 5.0, g0, 4096, true, 0.8), 5.0);
    EXPECT_GT(q.tau_qsl, 0.0);
    EXPECT_LE(q.tau_qsl, 5.0 * (1 + 1e-9));
    const auto v = measures::qsl_generic(measures::make_state_trajectory(v_type(2.0, 3, 0.5), 5.0, g0, 4096, true, 0.8), 5.0);
    EXPECT_GT(v.tau_qsl, 0.0);
}

TEST(Measures, GenericBoundRejectsBadGrids)
{
    const auto p = two_level(1.0, 1);
    EXPECT_THROW(measures::qsl_generic(measures::make_state_trajectory(p, 5.0, 0.0, 1000), 5.0), std::invalid_argument);
    auto tr = measures::make_state_trajectory(p, 5.0);
    tr.times[10] += 1e-4;
    EXPECT_THROW(measures::qsl_generic(tr, 5.0), std::invalid_argument);
    EXPECT_THROW(measures::qsl_generic(measures::make_state_trajectory(p, 5.0), 4.0), std::invalid_argument);
}

TEST(Measures, StationaryTrajectory)
{
    const auto p = two_level(0.0, 3);
    EXPECT_EQ(measures::qsl_generic(measures::make_state_trajectory(p, 5.0), 5.0).status,
              measures::Status::StationaryTrajectory);
    const auto r = measures::speedup_report(p, 5.0);
    EXPECT_EQ(r.status, measures::Status::StationaryTrajectory);
    EXPECT_EQ(r.ratio, 1.0);
    EXPECT_EQ(r.nonmarkov, 0.0);
}

TEST(Measures, QslNonMarkovianityIdentity)
{
    for (double g : {0.1, 0.5, 1.0, 2.0, 3.0})
        for (int n : {1, 3, 8, 30})
            for (double tau : {2.5, 5.0, 10.0}) {
                const auto p = two_level(g, n);
                const auto q = measures::qsl_two_level(p, tau);
                const double r = measures::nonmarkov_two_level(p, tau);
                EXPECT_NEAR(q.tau_qsl, tau / (2.0 * r / (1.0 - q.final_population) + 1.0), 1e-9 * tau);
            }
}

TEST(Measures, MonotoneDecayHasNoSpeedup)
{
    // N = 1, gamma0 < lambda/2: real d, population decays monotonically
    for (double g : {0.05, 0.3, 0.9}) {
        const auto r = measures::speedup_report(two_level(g, 1), 5.0);
        EXPECT_EQ(r.nonmarkov, 0.0);
        EXPECT_NEAR(r.ratio, 1.0, 1e-14);
        EXPECT_TRUE(measures::rate_sign_changes(two_level(g, 1), 5.0).empty());
    }
}

TEST(Measures, StrongCouplingSpeedsUp)
{
    const auto r = measures::speedup_report(two_level(3.0, 1), 5.0);
    EXPECT_LT(r.ratio, 1.0);
    EXPECT_GT(r.nonmarkov, 0.0);
}

TEST(Measures, StructuralZerosMatchDenseScan)
{
    for (double g : {0.3, 1.0, 2.0, 4.0})
        for (int n : {1, 3, 8, 30})
            for (const auto& p : {two_level(g, n), v_type(g, n, 0.5)}) {
                const auto a = measures::rate_sign_changes(p, 5.0);
                const auto b = measures::rate_sign_changes_scan(p, 5.0, 1 << 16);
                ASSERT_EQ(a.size(), b.size()) << "gamma0=" << g << " N=" << n;
                for (std::size_t k = 0; k < a.size(); ++k)
                    EXPECT_NEAR(a[k], b[k], 1e-10);
            }
}

TEST(Measures, TotalVariationMatchesQuadrature)
{
    for (double g : {0.3, 1.0, 2.0, 4.0})
        for (int n : {1, 8, 30}) {
            const auto p = two_level(g, n);
            EXPECT_NEAR(measures::abs_rate_integral(p, 5.0), measures::abs_rate_integral_quadrature(p, 5.0), 1e-9);
        }
}

TEST(Measures, ThreeLevelMappings)
{
    for (double g : {0.1, 0.5, 1.0, 2.0, 3.0})
        for (int n : {1, 3, 8, 30}) {
            EXPECT_NEAR(measures::qsl_three_level(v_type(g, n, 0.0), 5.0).tau_qsl,
                        measures::qsl_two_level(two_level(g, n), 5.0).tau_qsl, 1e-10);
            EXPECT_NEAR(measures::qsl_three_level(v_type(g, n, 1.0), 5.0).tau_qsl,
                        measures::qsl_two_level(two_level(2.0 * g, n), 5.0).tau_qsl, 1e-10);
            EXPECT_NEAR(measures::nonmarkov_three_level(v_type(g, n, 1.0), 5.0),
                        measures::nonmarkov_three_level(v_type(2.0 * g, n, 0.0), 5.0), 1e-10);
        }
    EXPECT_THROW(measures::qsl_three_level(two_level(1.0, 1), 5.0), std::invalid_argument);
    EXPECT_THROW(measures::nonmarkov_two_level(v_type(1.0, 1, 0.0), 5.0), std::invalid_argument);
}

TEST(Measures, NonMarkovianityGrowsWithWindow)
{
    for (double g : {0.5, 2.0, 4.0})
        for (int n : {1, 3, 30}) {
            double prev = 0.0;
            for (double tau : {2.5, 5.0, 10.0}) {
                const double r2 = measures::nonmarkov_two_level(two_level(g, n), tau);
                const double r3 = measures::nonmarkov_three_level(v_type(g, n, 0.5), tau);
                EXPECT_GE(r2, prev - 1e-15);
                prev = r2;
                EXPECT_GE(r3, 0.0);
            }
        }
}

TEST(Measures, QslNeverExceedsDrivingTime)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ug(0.0, 4.0), ut(0.1, 20.0), uth(0.0, 1.0);
    std::uniform_int_distribution<int> un(1, 30);
    for (int k = 0; k < 500; ++k) {
        const double tau = ut(rng);
        const auto a = measures::speedup_report(two_level(ug(rng), un(rng)), tau);
        const auto b = measures::speedup_report(v_type(ug(rng), un(rng), uth(rng)), tau);
        EXPECT_LE(a.ratio, 1.0);
        EXPECT_LE(b.ratio, 1.0);
        EXPECT_GE(a.ratio, 0.0);
        EXPECT_GE(a.nonmarkov, 0.0);
    }
}
