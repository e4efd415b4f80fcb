#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qspeed/dynamics.hpp"
#include "qspeed/params.hpp"

// Independent check of the closed-form dynamics: the memory kernel of the
// Lorentzian reservoir is a single exponential, so the integro-differential
// equation for the collective amplitude s = sum_l alpha_l becomes the local system
//   s' = -w z,   z' = -lambda z + N s,   z(0) = 0,
// integrated here with classic fixed-step RK4.

namespace qspeed::oracle {

/// Exponential memory kernel f(t) = weight * exp(-decay t).
struct KernelSpec
{
    double weight = 0.0;
    double decay = 1.0;
};

inline void validate(const KernelSpec& k)
{
    if (!(k.weight >= 0.0) || !(k.decay > 0.0))
        throw std::invalid_argument("KernelSpec: need weight >= 0 and decay > 0");
}

/// Kernel of the collective channel: gamma0 lambda/2 for two-level atoms,
/// (1 +/- theta) gamma0 lambda/2 for the V-type +/- channels.
inline KernelSpec channel_kernel(const ModelParams& p, int sign = +1)
{
    const double base = 0.5 * p.gamma0 * p.lambda;
    if (p.kind == AtomKind::TwoLevel)
        return {base, p.lambda};
    return {base * (1.0 + sign * p.theta), p.lambda};
}

class StepSizeFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int min_steps = 4096;
inline constexpr int validation_steps = 1 << 14;
inline constexpr double max_local_error = 1e-8;

/// Collective amplitude s and auxiliary memory z on the uniform grid.
struct ChannelSolution
{
    std::vector<cplx> s;
    std::vector<cplx> z;
    double max_local_error = 0.0;
};

namespace detail {

using State = std::array<cplx, 2>;

inline State rhs(const State& y, const KernelSpec& k, double n)
{
    return {-k.weight * y[1], -k.decay * y[1] + n * y[0]};
}

inline State rk4_step(const State& y, const KernelSpec& k, double n, double h)
{
    const auto add = [](const State& a, const State& b, double c) { return State{a[0] + c * b[0], a[1] + c * b[1]}; };
    const State k1 = rhs(y, k, n);
    const State k2 = rhs(add(y, k1, 0.5 * h), k, n);
    const State k3 = rhs(add(y, k2, 0.5 * h), k, n);
    const State k4 = rhs(add(y, k3, h), k, n);
    return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

} // namespace detail

/// Integrates one collective channel. Each step is checked against two half
/// steps; the Richardson estimate |y_half - y_full|/15 must stay below
/// `max_local_error`, otherwise StepSizeFailure is thrown.
inline ChannelSolution integrate_channel(const KernelSpec& kernel, int n_atoms, cplx s0, double tau, int steps)
{
    validate(kernel);
    if (!(tau > 0.0))
        throw std::invalid_argument("integrate_channel: tau must be > 0");
    if (steps < min_steps)
        throw std::invalid_argument("integrate_channel: need at least 4096 steps");
    const double h = tau / steps;
    const double n = n_atoms;
    ChannelSolution sol;
    sol.s.resize(steps + 1);
    sol.z.resize(steps + 1);
    detail::State y{s0, 0.0};
    sol.s[0] = y[0];
    sol.z[0] = y[1];
    for (int i = 1; i <= steps; ++i) {
        const detail::State full = detail::rk4_step(y, kernel, n, h);
        const detail::State half = detail::rk4_step(detail::rk4_step(y, kernel, n, 0.5 * h), kernel, n, 0.5 * h);
        const double err = std::max(std::abs(half[0] - full[0]), std::abs(half[1] - full[1])) / 15.0;
        sol.max_local_error = std::max(sol.max_local_error, err);
        if (err > max_local_error)
            throw StepSizeFailure("oracle: local truncation estimate exceeds 1e-8; increase steps");
        y = half;
        sol.s[i] = y[0];
        sol.z[i] = y[1];
    }
    return sol;
}

/// Main-atom trajectory for the default initial state, rebuilt from the
/// collective channel: every atom receives the same share (s(t) - s(0))/N.
inline dynamics::Trajectory solve_collective(const ModelParams& p, double tau, int steps = validation_steps)
{
    qspeed::validate(p);
    const double n = p.n_atoms;
    dynamics::Trajectory tr;
    tr.times.resize(steps + 1);
    tr.amplitude.resize(steps + 1);
    tr.population.resize(steps + 1);
    tr.population_rate.resize(steps + 1);

    if (p.kind == AtomKind::TwoLevel) {
        const KernelSpec k = channel_kernel(p);
        const ChannelSolution c = integrate_channel(k, p.n_atoms, 1.0, tau, steps);
        for (int i = 0; i <= steps; ++i) {
            const cplx a = 1.0 + (c.s[i] - c.s[0]) / n;
            const cplx da = -k.weight * c.z[i] / n;
            tr.amplitude[i] = a;
            tr.population[i] = std::norm(a);
            tr.population_rate[i] = 2.0 * (std::conj(a) * da).real();
        }
    } else {
        // nu^+ = nu^A + nu^B starts at sqrt 2 on the main atom, nu^- at 0
        const double s0 = std::numbers::sqrt2;
        const KernelSpec kp = channel_kernel(p, +1);
        const KernelSpec km = channel_kernel(p, -1);
        const ChannelSolution cp = integrate_channel(kp, p.n_atoms, s0, tau, steps);
        const ChannelSolution cm = integrate_channel(km, p.n_atoms, 0.0, tau, steps);
        for (int i = 0; i <= steps; ++i) {
            const cplx plus = s0 + (cp.s[i] - cp.s[0]) / n;
            const cplx minus = (cm.s[i] - cm.s[0]) / n;
            const cplx v = 0.5 * (plus + minus);
            const cplx dv = 0.5 * (-kp.weight * cp.z[i] - km.weight * cm.z[i]) / n;
            tr.amplitude[i] = v;
            tr.population[i] = 2.0 * std::norm(v);
            tr.population_rate[i] = 4.0 * (std::conj(v) * dv).real();
        }
    }
    const double h = tau / steps;
    for (int i = 0; i <= steps; ++i)
        tr.times[i] = i == steps ? tau : i * h;
    return tr;
}

} // namespace qspeed::oracle
