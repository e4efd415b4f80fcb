#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/SVD>

#include "qspeed/dynamics.hpp"
#include "qspeed/numerics.hpp"
#include "qspeed/params.hpp"

namespace qspeed::measures {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// The three Schatten orders entering the QSL bound.
inline constexpr std::array<double, 3> schatten_orders{1.0, 2.0, infinity};

inline Eigen::VectorXd singular_values(const ComplexMatrix& m)
{
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
}

/// Schatten p-norm for p in {1, 2, inf}.
inline double schatten_norm(const ComplexMatrix& m, double p)
{
    if (m.rows() != m.cols() || m.rows() < 2 || m.rows() > 3)
        throw std::invalid_argument("schatten_norm: expected a square 2x2 or 3x3 matrix");
    const Eigen::VectorXd sv = singular_values(m);
    if (p == 1.0)
        return sv.sum();
    if (p == 2.0)
        return sv.norm();
    if (p == infinity)
        return sv.maxCoeff();
    throw std::invalid_argument("schatten_norm: only p = 1, 2, inf are supported");
}

/// Frobenius-style purity test: Tr(rho^2) = 1 and Tr(rho) = 1.
inline bool is_pure(const DensityMatrix& rho, double tol = 1e-10)
{
    const double purity = (rho.entries * rho.entries).trace().real();
    return std::abs(purity - 1.0) <= tol && rho.trace_error() <= tol;
}

/// arccos sqrt(<phi0|rho|phi0>) for rho0 = |phi0><phi0|, computed as Tr(rho0 rho).
inline double bures_angle(const DensityMatrix& initial, const DensityMatrix& target)
{
    if (initial.dim() != target.dim())
        throw std::invalid_argument("bures_angle: dimension mismatch");
    if (!is_pure(initial))
        throw std::invalid_argument("bures_angle: initial state must be pure");
    const double fidelity = std::clamp((initial.entries * target.entries).trace().real(), 0.0, 1.0);
    return std::acos(std::sqrt(fidelity));
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    return 0.5 * schatten_norm(a.entries - b.entries, 1.0);
}

enum class Status { Normal, StationaryTrajectory };

inline std::string_view to_string(Status s)
{
    return s == Status::Normal ? "normal" : "stationary";
}

// ---------------------------------------------------------------------------
// Generic QSL bound from a sampled trajectory of density matrices

/// Density-matrix snapshots on a uniform grid. `rates` may be left empty, in
/// which case dρ/dt is rebuilt from second-order finite differences.
struct StateTrajectory
{
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<DensityMatrix> rates;
};

inline StateTrajectory make_state_trajectory(const ModelParams& p, double tau, cplx ground_amplitude = 0.0,
                                             int steps = dynamics::default_steps, bool analytic_rates = true,
                                             cplx excited_scale = 1.0)
{
    validate(p);
    if (!(tau > 0.0) || steps < 2)
        throw std::invalid_argument("make_state_trajectory: need tau > 0 and steps >= 2");
    StateTrajectory tr;
    tr.times.reserve(steps + 1);
    tr.states.reserve(steps + 1);
    const double h = tau / steps;
    for (int i = 0; i <= steps; ++i) {
        const double t = i == steps ? tau : i * h;
        tr.times.push_back(t);
        tr.states.push_back(dynamics::density_matrix(t, p, ground_amplitude, excited_scale));
        if (analytic_rates)
            tr.rates.push_back(dynamics::density_matrix_rate(t, p, ground_amplitude, excited_scale));
    }
    return tr;
}

struct GenericQsl
{
    double tau_qsl = 0.0;
    std::array<double, 3> speed{};  ///< Lambda^p for p = 1, 2, inf
    double bures = 0.0;
    Status status = Status::Normal;
};

namespace detail {

inline std::vector<DensityMatrix> finite_difference_rates(const StateTrajectory& tr, double h)
{
    const std::size_t n = tr.states.size();
    std::vector<DensityMatrix> d(n);
    const auto& s = tr.states;
    d[0].entries = (-3.0 * s[0].entries + 4.0 * s[1].entries - s[2].entries) / (2.0 * h);
    d[n - 1].entries = (3.0 * s[n - 1].entries - 4.0 * s[n - 2].entries + s[n - 3].entries) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i].entries = (s[i + 1].entries - s[i - 1].entries) / (2.0 * h);
    return d;
}

// Integral over one cell of the norm of the linear interpolant between two
// rate snapshots that point in opposite directions (the norm has a kink where
// the interpolant passes closest to zero).
inline double kink_cell_integral(const ComplexMatrix& a, const ComplexMatrix& b, double p, double h)
{
    static constexpr std::array<double, 4> x{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                             0.9602898564975363};
    static constexpr std::array<double, 4> w{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                             0.1012285362903763};
    const ComplexMatrix diff = b - a;
    const double dd = diff.squaredNorm();
    const double split = dd > 0.0 ? std::clamp(-(a.cwiseProduct(diff.conjugate())).sum().real() / dd, 0.0, 1.0)
                                  : 0.5;
    const auto piece = [&](double lo, double hi) {
        if (hi <= lo)
            return 0.0;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        double sum = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            for (double sign : {-1.0, 1.0}) {
                const double s = mid + sign * half * x[k];
                sum += w[k] * schatten_norm(a + s * diff, p);
            }
        return sum * half;
    };
    return h * (piece(0.0, split) + piece(split, 1.0));
}

// Composite Simpson over a run of smooth cells [first, first + count).
inline double smooth_run_integral(const std::vector<double>& f, std::size_t first, std::size_t count, double h)
{
    double sum = 0.0;
    std::size_t i = first;
    std::size_t left = count;
    if (left == 1)
        return 0.5 * h * (f[i] + f[i + 1]);
    if (left % 2 == 1) {
        // Simpson 3/8 on the first three cells keeps the rest even
        sum += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
        i += 3;
        left -= 3;
    }
    for (; left >= 2; left -= 2, i += 2)
        sum += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    return sum;
}

} // namespace detail

/// Deffner-Lutz bound tau_QSL = max_p(1/Lambda^p) sin^2 B(rho(0), rho(tau)) from snapshots.
///
/// Lambda^p = (1/tau) int ||drho/dt||_p dt. Cells where consecutive rate
/// snapshots point in opposite directions contain a kink of the norm and are
/// integrated on the linear interpolant split at its minimum; all other cells
/// use composite Simpson.
inline GenericQsl qsl_generic(const StateTrajectory& tr, double tau)
{
    const std::size_t n = tr.times.size();
    if (n < 4097 || tr.states.size() != n)
        throw std::invalid_argument("qsl_generic: need at least 4096 snapshots with matching states");
    if (!tr.rates.empty() && tr.rates.size() != n)
        throw std::invalid_argument("qsl_generic: rate snapshots do not match the time grid");
    const double h = (tr.times.back() - tr.times.front()) / double(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double step = tr.times[i] - tr.times[i - 1];
        if (!(step > 0.0))
            throw std::invalid_argument("qsl_generic: time grid is not strictly increasing");
        if (std::abs(step - h) > 1e-9 * h)
            throw std::invalid_argument("qsl_generic: time grid is not uniform");
    }
    if (std::abs(tr.times.back() - tr.times.front() - tau) > 1e-12 * tau)
        throw std::invalid_argument("qsl_generic: tau does not match the trajectory span");

    const std::vector<DensityMatrix> fd = tr.rates.empty() ? detail::finite_difference_rates(tr, h) : std::vector<DensityMatrix>{};
    const std::vector<DensityMatrix>& rates = tr.rates.empty() ? fd : tr.rates;

    // kink flags per cell
    std::vector<char> kink(n - 1, 0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        kink[i] = (rates[i].entries.cwiseProduct(rates[i + 1].entries.conjugate())).sum().real() < 0.0;

    GenericQsl out;
    for (std::size_t k = 0; k < schatten_orders.size(); ++k) {
        const double p = schatten_orders[k];
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = schatten_norm(rates[i].entries, p);
        double integral = 0.0;
        std::size_t i = 0;
        while (i + 1 < n) {
            if (kink[i]) {
                integral += detail::kink_cell_integral(rates[i].entries, rates[i + 1].entries, p, h);
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < n && !kink[j])
                ++j;
            integral += detail::smooth_run_integral(f, i, j - i, h);
            i = j;
        }
        out.speed[k] = integral / tau;
    }

    out.bures = bures_angle(tr.states.front(), tr.states.back());
    if (std::all_of(out.speed.begin(), out.speed.end(), [](double v) { return v == 0.0; })) {
        out.status = Status::StationaryTrajectory;
        out.tau_qsl = 0.0;
        return out;
    }
    double inverse = 0.0;
    for (double v : out.speed)
        if (v > 0.0)
            inverse = std::max(inverse, 1.0 / v);
    const double sb = std::sin(out.bures);
    out.tau_qsl = inverse * sb * sb;
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form measures for the default initial states

inline constexpr int zero_scan_samples = 4096;
inline constexpr double zero_time_tol = 1e-12;
inline constexpr double piece_tol = 1e-12;

/// Times in (0, tau) where the excited-population rate changes sign.
///
/// The rate is proportional to a a' with a real. a' vanishes exactly at
/// t_k = 2 pi k / |d| when d is imaginary and nowhere else, so a is monotone
/// between consecutive t_k and each stretch holds at most one zero of a.
inline std::vector<double> rate_sign_changes(const ModelParams& p, double tau)
{
    validate(p);
    std::vector<double> out;
    if (p.gamma0 == 0.0)
        return out;
    const cplx d = dynamics::PropagatorParams(p).main_channel(p.kind);
    std::vector<double> knots{0.0};
    if (d.imag() > 0.0) {
        const double period = 2.0 * std::numbers::pi / d.imag();
        for (int k = 1; k * period < tau; ++k)
            knots.push_back(k * period);
    }
    knots.push_back(tau);
    const auto amp = [&](double t) { return dynamics::main_amplitude(t, p).real(); };
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i];
        const double b = knots[i + 1];
        if ((amp(a) < 0.0) != (amp(b) < 0.0))
            out.push_back(numerics::bisect(amp, a, b, zero_time_tol));
        if (i + 2 < knots.size())
            out.push_back(b);
    }
    return out;
}

/// Brute-force variant: uniform scan of the rate plus bisection. Used to
/// cross-check the structural version above.
inline std::vector<double> rate_sign_changes_scan(const ModelParams& p, double tau, int samples = zero_scan_samples)
{
    return numerics::sign_changes([&](double t) { return dynamics::population_rate(t, p); }, 0.0, tau, samples,
                                  zero_time_tol);
}

/// int_0^tau |dP/dt| dt. P is monotone between consecutive sign changes of
/// the rate, so the integral is the total variation sum |P(b) - P(a)|.
inline double abs_rate_integral(const ModelParams& p, double tau, const std::vector<double>& zeros)
{
    double sum = 0.0;
    double a = 0.0;
    double pa = dynamics::population(a, p);
    for (std::size_t k = 0; k <= zeros.size(); ++k) {
        const double b = k < zeros.size() ? zeros[k] : tau;
        const double pb = dynamics::population(b, p);
        sum += std::abs(pb - pa);
        a = b;
        pa = pb;
    }
    return sum;
}

/// Same integral by piecewise adaptive Simpson on |dP/dt|; a cross-check.
inline double abs_rate_integral_quadrature(const ModelParams& p, double tau)
{
    const auto abs_rate = [&](double t) { return std::abs(dynamics::population_rate(t, p)); };
    std::vector<double> edges = rate_sign_changes(p, tau);
    edges.push_back(tau);
    double sum = 0.0;
    double a = 0.0;
    for (double b : edges) {
        sum += numerics::adaptive_simpson(abs_rate, a, b, piece_tol).value;
        a = b;
    }
    return sum;
}

inline double abs_rate_integral(const ModelParams& p, double tau)
{
    return abs_rate_integral(p, tau, rate_sign_changes(p, tau));
}

struct QslResult
{
    double tau_qsl = 0.0;
    double final_population = 0.0;
    double abs_rate_integral = 0.0;
    Status status = Status::Normal;
};

namespace detail {

inline void require_tau(double tau)
{
    if (!(tau > 0.0))
        throw std::invalid_argument("driving time tau must be > 0");
}

// tau (1 - P(tau)) / int |dP/dt|; the same expression serves both atom kinds
// because P is |alpha1|^2 or 2|nu1|^2.
inline QslResult qsl_closed_form(const ModelParams& p, double tau)
{
    validate(p);
    require_tau(tau);
    QslResult r;
    r.final_population = dynamics::population(tau, p);
    r.abs_rate_integral = abs_rate_integral(p, tau);
    if (r.abs_rate_integral == 0.0) {
        r.status = Status::StationaryTrajectory;
        return r;
    }
    // tau_QSL <= tau holds exactly; the clamp only absorbs quadrature rounding
    r.tau_qsl = std::min(tau, tau * (1.0 - r.final_population) / r.abs_rate_integral);
    return r;
}

} // namespace detail

inline QslResult qsl_two_level(const ModelParams& p, double tau)
{
    dynamics::require_kind(p, AtomKind::TwoLevel, "qsl_two_level");
    return detail::qsl_closed_form(p, tau);
}

inline QslResult qsl_three_level(const ModelParams& p, double tau)
{
    dynamics::require_kind(p, AtomKind::ThreeLevelV, "qsl_three_level");
    return detail::qsl_closed_form(p, tau);
}

/// BLP measure with the optimal pair: R = (|alpha1(tau)|^2 - 1 + int |d|alpha1|^2/dt|) / 2.
inline double nonmarkov_two_level(const ModelParams& p, double tau)
{
    dynamics::require_kind(p, AtomKind::TwoLevel, "nonmarkov_two_level");
    validate(p);
    detail::require_tau(tau);
    const double integral = abs_rate_integral(p, tau);
    return std::max(0.0, 0.5 * (dynamics::population(tau, p) - 1.0 + integral));
}

/// BLP measure for the V-type atom: R = 2 * sum over rising stretches of |nu1|.
inline double nonmarkov_three_level(const ModelParams& p, double tau)
{
    dynamics::require_kind(p, AtomKind::ThreeLevelV, "nonmarkov_three_level");
    validate(p);
    detail::require_tau(tau);
    // d|nu1|/dt and d|nu1|^2/dt share their sign changes while |nu1| > 0
    std::vector<double> edges = rate_sign_changes(p, tau);
    edges.insert(edges.begin(), 0.0);
    edges.push_back(tau);
    double rise = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double a = edges[k];
        const double b = edges[k + 1];
        if (dynamics::population_rate(0.5 * (a + b), p) > 0.0)
            rise += std::abs(dynamics::nu1(b, p)) - std::abs(dynamics::nu1(a, p));
    }
    return 2.0 * rise;
}

/// All figure quantities for one parameter point.
struct SpeedupReport
{
    double tau = 0.0;
    double tau_qsl = 0.0;
    double ratio = 1.0;
    double nonmarkov = 0.0;
    double final_population = 0.0;
    Status status = Status::Normal;
};

/// tau_QSL, ratio and R for either atom kind. A stationary trajectory reports
/// tau_QSL = 0 with ratio = 1 by convention.
inline SpeedupReport speedup_report(const ModelParams& p, double tau)
{
    const QslResult q = p.kind == AtomKind::TwoLevel ? qsl_two_level(p, tau) : qsl_three_level(p, tau);
    SpeedupReport r;
    r.tau = tau;
    r.tau_qsl = q.tau_qsl;
    r.final_population = q.final_population;
    r.status = q.status;
    r.ratio = q.status == Status::Normal ? q.tau_qsl / tau : 1.0;
    r.nonmarkov = p.kind == AtomKind::TwoLevel ? nonmarkov_two_level(p, tau) : nonmarkov_three_level(p, tau);
    return r;
}

} // namespace qspeed::measures
