#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qspeed/bound_state.hpp"
#include "qspeed/dynamics.hpp"
#include "qspeed/measures.hpp"
#include "qspeed/oracle.hpp"

namespace qspeed::validation {

struct Check
{
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

/// Closed-form amplitude under test; swapped out by negative-control tests.
using AmplitudeFn = std::function<cplx(double, const ModelParams&)>;

struct Options
{
    bool quick = false;
    AmplitudeFn amplitude = [](double t, const ModelParams& p) { return dynamics::main_amplitude(t, p); };
};

struct Grid
{
    std::vector<double> gamma0;
    std::vector<int> n_atoms;
    std::vector<double> theta;
    int oracle_steps;
};

inline Grid grid(bool quick)
{
    if (quick)
        return {{0.5, 3.0}, {1, 30}, {0.0, 1.0}, oracle::min_steps};
    return {{0.1, 0.5, 1.0, 2.0, 3.0}, {1, 3, 8, 30}, {0.0, 1.0}, oracle::validation_steps};
}

inline constexpr double lambda = 2.0;
inline constexpr double tau = 5.0;

namespace detail {

inline void record(Check& c, double residual)
{
    if (!(residual <= c.max_residual))
        c.max_residual = std::isnan(residual) ? INFINITY : std::max(c.max_residual, residual);
    c.pass = c.max_residual < c.tolerance;
}

} // namespace detail

/// Runs every check on the acceptance grid (or its quick subset).
inline std::vector<Check> run(const Options& opt)
{
    const Grid g = grid(opt.quick);
    std::vector<Check> out;

    Check oracle_two{"oracle equivalence, two-level amplitude", 0.0, 1e-6};
    Check oracle_three{"oracle equivalence, three-level amplitude", 0.0, 1e-6};
    for (double g0 : g.gamma0)
        for (int n : g.n_atoms) {
            const ModelParams p2{1.0, lambda, g0, n, 0.0, AtomKind::TwoLevel};
            const dynamics::Trajectory o2 = oracle::solve_collective(p2, tau, g.oracle_steps);
            for (std::size_t i = 0; i < o2.times.size(); ++i)
                detail::record(oracle_two, std::abs(opt.amplitude(o2.times[i], p2) - o2.amplitude[i]));
            for (double th : g.theta) {
                const ModelParams p3{1.0, lambda, g0, n, th, AtomKind::ThreeLevelV};
                const dynamics::Trajectory o3 = oracle::solve_collective(p3, tau, g.oracle_steps);
                for (std::size_t i = 0; i < o3.times.size(); ++i)
                    detail::record(oracle_three, std::abs(opt.amplitude(o3.times[i], p3) - o3.amplitude[i]));
            }
        }
    out.push_back(oracle_two);
    out.push_back(oracle_three);

    Check identity{"QSL / non-Markovianity identity (two-level)", 0.0, 1e-9 * tau};
    Check reduction0{"three-level theta=0 reduces to two-level (population, tau_QSL)", 0.0, 1e-10};
    Check reduction1{"three-level theta=1 maps to two-level at 2 gamma0", 0.0, 1e-10};
    Check zeros0{"theta=0 backflow times match two-level", 0.0, 1e-10};
    for (double g0 : g.gamma0)
        for (int n : g.n_atoms) {
            const ModelParams p2{1.0, lambda, g0, n, 0.0, AtomKind::TwoLevel};
            const auto q = measures::qsl_two_level(p2, tau);
            const double r = measures::nonmarkov_two_level(p2, tau);
            if (q.status == measures::Status::Normal) {
                const double predicted = tau / (2.0 * r / (1.0 - q.final_population) + 1.0);
                detail::record(identity, std::abs(q.tau_qsl - predicted));
            }

            const ModelParams p30{1.0, lambda, g0, n, 0.0, AtomKind::ThreeLevelV};
            const auto q30 = measures::qsl_three_level(p30, tau);
            detail::record(reduction0, std::abs(q30.tau_qsl - q.tau_qsl));
            for (int i = 0; i <= 64; ++i) {
                const double t = tau * i / 64.0;
                detail::record(reduction0, std::abs(dynamics::population(t, p30) - dynamics::population(t, p2)));
            }
            const auto z2 = measures::rate_sign_changes(p2, tau);
            const auto z3 = measures::rate_sign_changes(p30, tau);
            if (z2.size() != z3.size()) {
                detail::record(zeros0, INFINITY);
            } else {
                for (std::size_t k = 0; k < z2.size(); ++k)
                    detail::record(zeros0, std::abs(z2[k] - z3[k]));
            }

            const ModelParams p31{1.0, lambda, g0, n, 1.0, AtomKind::ThreeLevelV};
            const ModelParams p2d{1.0, lambda, 2.0 * g0, n, 0.0, AtomKind::TwoLevel};
            detail::record(reduction1, std::abs(measures::qsl_three_level(p31, tau).tau_qsl
                                                - measures::qsl_two_level(p2d, tau).tau_qsl));
            for (int i = 0; i <= 64; ++i) {
                const double t = tau * i / 64.0;
                detail::record(reduction1, std::abs(dynamics::population(t, p31) - dynamics::population(t, p2d)));
            }
        }
    out.push_back(identity);
    out.push_back(reduction0);
    out.push_back(reduction1);
    out.push_back(zeros0);

    Check generic{"generic QSL bound equals closed form (alpha0 = 0)", 0.0, 1e-6};
    for (double g0 : opt.quick ? std::vector<double>{2.0} : std::vector<double>{0.5, 2.0, 3.0})
        for (int n : {1, 8}) {
            const ModelParams p{1.0, lambda, g0, n, 0.0, AtomKind::TwoLevel};
            const auto closed = measures::qsl_two_level(p, tau);
            const auto gen = measures::qsl_generic(measures::make_state_trajectory(p, tau), tau);
            detail::record(generic, std::abs(gen.tau_qsl - closed.tau_qsl) / closed.tau_qsl);
        }
    out.push_back(generic);

    Check steady{"steady population alpha1(50) -> (N-1)/N", 0.0, 1e-6};
    for (int n : {3, 8, 30}) {
        const ModelParams p{1.0, lambda, 1.0, n, 0.0, AtomKind::TwoLevel};
        detail::record(steady, std::abs(opt.amplitude(50.0, p) - (n - 1.0) / n));
    }
    out.push_back(steady);

    Check bound{"bound-state residual |K(E_b) - E_b| / max(1, |E_b|)", 0.0, 1e-10};
    for (double g0 : g.gamma0)
        for (int n : g.n_atoms) {
            const auto b = bound_state::find_bound_state({1.0, lambda, g0, n, 0.0, AtomKind::TwoLevel});
            detail::record(bound, b.residual / std::max(1.0, std::abs(*b.energy)));
        }
    out.push_back(bound);
    return out;
}

inline bool all_pass(const std::vector<Check>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

} // namespace qspeed::validation
