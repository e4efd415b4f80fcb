#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qspeed/params.hpp"

namespace qspeed {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

/// Reduced state of the main atom: 2x2 in {|e>, |g>} or 3x3 in {|A>, |B>, |C>}.
struct DensityMatrix
{
    ComplexMatrix entries;

    int dim() const { return int(entries.rows()); }

    double hermiticity_error() const { return (entries - entries.adjoint()).cwiseAbs().maxCoeff(); }
    double trace_error() const { return std::abs(entries.trace() - cplx(1.0)); }
};

namespace dynamics {

/// Principal square root of a real argument: real >= 0, or i*sqrt(-arg).
inline cplx principal_root(double arg)
{
    return arg >= 0.0 ? cplx(std::sqrt(arg), 0.0) : cplx(0.0, std::sqrt(-arg));
}

/// The three characteristic roots of the collective channels.
struct PropagatorParams
{
    double lambda = 0.0;
    double gamma0 = 0.0;
    int n_atoms = 1;
    double theta = 0.0;
    cplx d_plus;
    cplx d_minus;
    cplx d_two_level;

    explicit PropagatorParams(const ModelParams& p)
        : lambda(p.lambda), gamma0(p.gamma0), n_atoms(p.n_atoms), theta(p.theta)
    {
        const double l2 = lambda * lambda;
        const double c = 2.0 * gamma0 * lambda * n_atoms;
        d_plus = principal_root(l2 - c * (1.0 + theta));
        d_minus = principal_root(l2 - c * (1.0 - theta));
        d_two_level = principal_root(l2 - c);
    }

    /// Root of the channel the default initial state populates.
    cplx main_channel(AtomKind kind) const { return kind == AtomKind::TwoLevel ? d_two_level : d_plus; }
};

namespace detail {

// sinh(x)/x, continuous through x = 0
inline cplx sinhc(cplx x)
{
    if (std::abs(x) < 1e-4) {
        const cplx x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

// (e^{-lt/2} cosh(x), e^{-lt/2} sinh(x)/x) with x = dt/2, without overflow for large t
inline std::pair<cplx, cplx> damped_cosh_sinhc(double t, cplx d, double lambda)
{
    const cplx x = 0.5 * d * t;
    const double decay = 0.5 * lambda * t;
    if (std::abs(x) <= 0.5) {
        const double envelope = std::exp(-decay);
        return {envelope * std::cosh(x), envelope * sinhc(x)};
    }
    const cplx ep = std::exp(x - decay);
    const cplx em = std::exp(-x - decay);
    return {0.5 * (ep + em), (ep - em) / (2.0 * x)};
}

} // namespace detail

/// e^{-lambda t/2} (cosh(dt/2) + (lambda/d) sinh(dt/2)).
///
/// Written as cosh + (lambda t/2) sinhc so that the critical case d = 0
/// (limit 1 + lambda t/2) needs no special branch.
inline cplx g_factor(double t, cplx d, double lambda)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("g_factor: t must be >= 0");
    const auto [c, s] = detail::damped_cosh_sinhc(t, d, lambda);
    return c + 0.5 * lambda * t * s;
}

/// d/dt g_factor = e^{-lambda t/2} (d^2 - lambda^2) t/4 sinhc(dt/2); vanishes at t = 0.
inline cplx g_factor_rate(double t, cplx d, double lambda)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("g_factor_rate: t must be >= 0");
    const cplx s = detail::damped_cosh_sinhc(t, d, lambda).second;
    return (d * d - lambda * lambda) * 0.25 * t * s;
}

inline void require_time(double t)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("time must be >= 0");
}

inline void require_kind(const ModelParams& p, AtomKind kind, const char* what)
{
    if (p.kind != kind)
        throw std::invalid_argument(std::string(what) + ": wrong atom kind");
}

/// Amplitude of atom `l` for arbitrary initial amplitudes of all N atoms in
/// one collective channel with characteristic root d.
inline cplx channel_amplitude(double t, cplx d, double lambda, std::span<const cplx> initial, std::size_t l)
{
    const std::size_t n = initial.size();
    if (n == 0 || l >= n)
        throw std::invalid_argument("channel_amplitude: atom index out of range");
    const cplx g = g_factor(t, d, lambda);
    cplx others = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        if (j != l)
            others += initial[j];
    const double nn = double(n);
    return g * initial[l] + ((nn - 1.0) * initial[l] - others) / nn * (1.0 - g);
}

/// Two-level amplitude of atom `l` for arbitrary initial excited amplitudes.
inline cplx alpha_general(double t, const ModelParams& p, std::span<const cplx> initial, std::size_t l)
{
    require_kind(p, AtomKind::TwoLevel, "alpha_general");
    if (initial.size() != std::size_t(p.n_atoms))
        throw std::invalid_argument("alpha_general: need one initial amplitude per atom");
    return channel_amplitude(t, PropagatorParams(p).d_two_level, p.lambda, initial, l);
}

/// V-type amplitudes (nu_l^A, nu_l^B) for arbitrary initial amplitudes, via the
/// symmetric (+) and antisymmetric (-) channels.
inline std::pair<cplx, cplx> nu_general(double t, const ModelParams& p, std::span<const cplx> initial_a,
                                        std::span<const cplx> initial_b, std::size_t l)
{
    require_kind(p, AtomKind::ThreeLevelV, "nu_general");
    const std::size_t n = std::size_t(p.n_atoms);
    if (initial_a.size() != n || initial_b.size() != n)
        throw std::invalid_argument("nu_general: need one initial amplitude per atom and level");
    std::vector<cplx> plus(n), minus(n);
    for (std::size_t j = 0; j < n; ++j) {
        plus[j] = initial_a[j] + initial_b[j];
        minus[j] = initial_a[j] - initial_b[j];
    }
    const PropagatorParams pp(p);
    const cplx np = channel_amplitude(t, pp.d_plus, p.lambda, plus, l);
    const cplx nm = channel_amplitude(t, pp.d_minus, p.lambda, minus, l);
    return {0.5 * (np + nm), 0.5 * (np - nm)};
}

/// alpha~_1(t) with the main atom excited and every spectator in its ground state.
inline cplx alpha1(double t, const ModelParams& p)
{
    require_kind(p, AtomKind::TwoLevel, "alpha1");
    require_time(t);
    const double n = p.n_atoms;
    return (n - 1.0) / n + g_factor(t, PropagatorParams(p).d_two_level, p.lambda) / n;
}

inline cplx alpha1_rate(double t, const ModelParams& p)
{
    require_kind(p, AtomKind::TwoLevel, "alpha1_rate");
    require_time(t);
    return g_factor_rate(t, PropagatorParams(p).d_two_level, p.lambda) / double(p.n_atoms);
}

inline const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

/// nu_1(t) = nu_1^A = nu_1^B for the main atom prepared in (|A> + |B>)/sqrt 2.
/// Only the + channel is populated, so theta enters solely through d_plus.
inline cplx nu1(double t, const ModelParams& p)
{
    require_kind(p, AtomKind::ThreeLevelV, "nu1");
    require_time(t);
    const double n = p.n_atoms;
    return inv_sqrt2 * ((n - 1.0) / n + g_factor(t, PropagatorParams(p).d_plus, p.lambda) / n);
}

inline cplx nu1_rate(double t, const ModelParams& p)
{
    require_kind(p, AtomKind::ThreeLevelV, "nu1_rate");
    require_time(t);
    return inv_sqrt2 * g_factor_rate(t, PropagatorParams(p).d_plus, p.lambda) / double(p.n_atoms);
}

/// alpha1 or nu1 depending on the atom kind.
inline cplx main_amplitude(double t, const ModelParams& p)
{
    return p.kind == AtomKind::TwoLevel ? alpha1(t, p) : nu1(t, p);
}

inline cplx main_amplitude_rate(double t, const ModelParams& p)
{
    return p.kind == AtomKind::TwoLevel ? alpha1_rate(t, p) : nu1_rate(t, p);
}

/// Excited population of the main atom: |alpha1|^2, or |nu1^A|^2 + |nu1^B|^2 = 2|nu1|^2.
inline double population(double t, const ModelParams& p)
{
    const double a2 = std::norm(main_amplitude(t, p));
    return p.kind == AtomKind::TwoLevel ? a2 : 2.0 * a2;
}

/// Analytic d/dt of `population`.
inline double population_rate(double t, const ModelParams& p)
{
    const cplx a = main_amplitude(t, p);
    const cplx da = main_amplitude_rate(t, p);
    const double r = 2.0 * (std::conj(a) * da).real();
    return p.kind == AtomKind::TwoLevel ? r : 2.0 * r;
}

struct Trajectory
{
    std::vector<double> times;
    std::vector<cplx> amplitude;
    std::vector<double> population;
    std::vector<double> population_rate;

    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

inline constexpr int default_steps = 4096;

/// Samples the main-atom amplitude on a uniform grid of `steps` intervals over [0, tau].
inline Trajectory make_trajectory(const ModelParams& p, double tau, int steps = default_steps)
{
    validate(p);
    if (!(tau > 0.0) || steps < 1)
        throw std::invalid_argument("make_trajectory: need tau > 0 and steps >= 1");
    Trajectory tr;
    tr.times.resize(steps + 1);
    tr.amplitude.resize(steps + 1);
    tr.population.resize(steps + 1);
    tr.population_rate.resize(steps + 1);
    const double dt = tau / steps;
    for (int i = 0; i <= steps; ++i) {
        const double t = i == steps ? tau : i * dt;
        tr.times[i] = t;
        tr.amplitude[i] = main_amplitude(t, p);
        // the default initial states keep every amplitude real
        if (std::abs(tr.amplitude[i].imag()) > 1e-13)
            throw std::logic_error("make_trajectory: imaginary residue in amplitude");
        tr.population[i] = population(t, p);
        tr.population_rate[i] = population_rate(t, p);
    }
    return tr;
}

inline void require_normalizable(double ground2, double excited2)
{
    if (ground2 + excited2 > 1.0 + 1e-12)
        throw std::invalid_argument("density_matrix: |ground|^2 + |excited|^2 exceeds 1");
}

/// Reduced density matrix of the main atom. `ground_amplitude` is the amplitude
/// of the all-ground component (alpha_0 or nu_0, constant in time);
/// `excited_scale` multiplies the default excited initial state.
inline DensityMatrix density_matrix(double t, const ModelParams& p, cplx ground_amplitude, cplx excited_scale = 1.0)
{
    require_normalizable(std::norm(ground_amplitude), std::norm(excited_scale));
    const cplx g0 = ground_amplitude;
    DensityMatrix rho;
    if (p.kind == AtomKind::TwoLevel) {
        const cplx a = excited_scale * alpha1(t, p);
        rho.entries.resize(2, 2);
        rho.entries << std::norm(a), a * std::conj(g0),
                       g0 * std::conj(a), 1.0 - std::norm(a);
    } else {
        const cplx v = excited_scale * nu1(t, p);  // nu^A = nu^B
        const double pv = std::norm(v);
        rho.entries.resize(3, 3);
        rho.entries << pv, pv, v * std::conj(g0),
                       pv, pv, v * std::conj(g0),
                       g0 * std::conj(v), g0 * std::conj(v), 1.0 - 2.0 * pv;
    }
    return rho;
}

/// Analytic time derivative of `density_matrix`.
inline DensityMatrix density_matrix_rate(double t, const ModelParams& p, cplx ground_amplitude, cplx excited_scale = 1.0)
{
    require_normalizable(std::norm(ground_amplitude), std::norm(excited_scale));
    const cplx g0 = ground_amplitude;
    const cplx a = excited_scale * main_amplitude(t, p);
    const cplx da = excited_scale * main_amplitude_rate(t, p);
    const double dpa = 2.0 * (std::conj(a) * da).real();
    DensityMatrix d;
    if (p.kind == AtomKind::TwoLevel) {
        d.entries.resize(2, 2);
        d.entries << dpa, da * std::conj(g0),
                     g0 * std::conj(da), -dpa;
    } else {
        d.entries.resize(3, 3);
        d.entries << dpa, dpa, da * std::conj(g0),
                     dpa, dpa, da * std::conj(g0),
                     g0 * std::conj(da), g0 * std::conj(da), -2.0 * dpa;
    }
    return d;
}

} // namespace dynamics
} // namespace qspeed
