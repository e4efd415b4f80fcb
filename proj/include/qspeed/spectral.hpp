#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qspeed/numerics.hpp"
#include "qspeed/params.hpp"

namespace qspeed::spectral {

/// Lorentzian spectral density J(omega) = gamma0 lambda^2 / (2 pi ((omega - omega0)^2 + lambda^2)).
inline double lorentzian_j(double omega, const ModelParams& p)
{
    if (!(omega >= 0.0))
        throw std::invalid_argument("lorentzian_j: omega must be >= 0");
    const double detuning = omega - p.omega0;
    return p.gamma0 * p.lambda * p.lambda
         / (2.0 * std::numbers::pi * (detuning * detuning + p.lambda * p.lambda));
}

/// Integral of J over [0, inf).
inline double total_weight(const ModelParams& p)
{
    return p.gamma0 * p.lambda / (2.0 * std::numbers::pi)
         * (0.5 * std::numbers::pi + std::atan(p.omega0 / p.lambda));
}

inline void require_negative_energy(double e)
{
    if (!(e < 0.0))
        throw std::domain_error("reservoir integral is only defined for e < 0");
}

/// I(e) = int_0^inf J(w) / (w - e) dw for e < 0, in closed form.
///
/// With u = w - omega0 and s = omega0 - e the integrand splits as
///   1/((u^2 + l^2)(u + s)) = A/(u + s) + A (s - u)/(u^2 + l^2),  A = 1/(s^2 + l^2),
/// whose antiderivatives are logarithms and an arctangent. The only singular
/// piece is -log(-e), so the result stays finite for any representable e < 0.
inline double reservoir_integral(double e, const ModelParams& p)
{
    require_negative_energy(e);
    if (p.gamma0 == 0.0)
        return 0.0;
    const double w0 = p.omega0;
    const double l = p.lambda;
    const double c = -e;
    const double s = w0 + c;
    const double a = 1.0 / (s * s + l * l);
    const double logs = 0.5 * std::log(w0 * w0 + l * l) - std::log(c);
    const double arc = s / l * (0.5 * std::numbers::pi + std::atan(w0 / l));
    return p.gamma0 * l * l / (2.0 * std::numbers::pi) * a * (logs + arc);
}

/// dI/de, used by the dense-scan diagnostics. Positive for gamma0 > 0.
inline double reservoir_integral_derivative(double e, const ModelParams& p, double rel_step = 1e-6)
{
    require_negative_energy(e);
    const double h = rel_step * std::abs(e);
    return (reservoir_integral(e + h, p) - reservoir_integral(e - h, p)) / (2.0 * h);
}

/// Same integral by adaptive quadrature: split at omega0 and at omega0 + 10 lambda,
/// the tail mapped through w = 1/u. Kept as an independent cross-check of the
/// closed form; below |e| ~ 1e-10 the log singularity at w = 0 exhausts the
/// subdivision depth and accuracy degrades to roughly 1e-8 relative.
inline double reservoir_integral_quadrature(double e, const ModelParams& p, double rel_tol = 1e-13)
{
    require_negative_energy(e);
    if (p.gamma0 == 0.0)
        return 0.0;
    const auto integrand = [&](double w) { return lorentzian_j(w, p) / (w - e); };
    const double knee = p.omega0 + 10.0 * p.lambda;
    const double u_max = 1.0 / knee;
    const auto tail = [&](double u) {
        if (u == 0.0)
            return 0.0;
        const double w = 1.0 / u;
        return integrand(w) / (u * u);
    };
    // absolute tolerance scaled to the magnitude of the answer
    const double scale = std::max(total_weight(p) / (p.omega0 - e), 1e-300);
    const double tol = rel_tol * scale;
    double sum = 0.0;
    // geometric breakpoints towards w = 0 resolve the 1/(w - e) peak when |e| << omega0
    double hi = p.omega0;
    while (hi > 4.0 * -e && hi > 1e-14 * p.omega0) {
        const double lo = 0.25 * hi;
        sum += numerics::adaptive_simpson(integrand, lo, hi, tol, 60).value;
        hi = lo;
    }
    sum += numerics::adaptive_simpson(integrand, 0.0, hi, tol, 60).value;
    sum += numerics::adaptive_simpson(integrand, p.omega0, knee, tol, 60).value;
    sum += numerics::adaptive_simpson(tail, 0.0, u_max, tol, 60).value;
    return sum;
}

} // namespace qspeed::spectral
