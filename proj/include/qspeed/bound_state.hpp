#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "qspeed/params.hpp"
#include "qspeed/spectral.hpp"

namespace qspeed::bound_state {

struct BoundStateResult
{
    bool exists = false;
    std::optional<double> energy;  ///< E_b < 0, present iff exists
    double residual = 0.0;         ///< |K(E_b) - E_b|
    double lo = 0.0;               ///< final bracket
    double hi = 0.0;
    int iterations = 0;
    int probes = 0;                ///< bracket-search evaluations
};

/// K(e) = omega0 - m I(e) with m = N (two-level) or N(1 + theta) (V-type).
inline double kernel_k(double e, const ModelParams& p)
{
    return p.omega0 - p.channel_weight() * spectral::reservoir_integral(e, p);
}

/// h(e) = K(e) - e, strictly decreasing on (-inf, 0) with a single zero.
inline double mismatch(double e, const ModelParams& p) { return kernel_k(e, p) - e; }

inline constexpr int max_bracket_probes = 200;
inline constexpr int max_bisections = 65;

/// Solves K(E) = E on the negative axis by bracketing and bisection.
///
/// The lower end expands as -1, -2, -4, ...; the upper end shrinks as
/// -1e-2, -1e-4, ... down to the smallest normal double. Throws BracketFailure
/// if no sign change is straddled within `max_bracket_probes` evaluations.
inline BoundStateResult find_bound_state(const ModelParams& p)
{
    validate(p);
    BoundStateResult r;
    if (p.gamma0 == 0.0)
        return r;

    const auto h = [&](double e) { return mismatch(e, p); };

    double lo = -1.0;
    double hi = -1e-2;
    int probes = 1;
    double hlo = h(lo);
    const bool root_below_minus_one = hlo <= 0.0;
    while (hlo <= 0.0) {
        if (probes >= max_bracket_probes)
            throw BracketFailure("bound state: lower bracket not found within probe budget");
        hi = lo;
        lo *= 2.0;
        hlo = h(lo);
        ++probes;
    }
    if (!root_below_minus_one) {
        constexpr double floor = std::numeric_limits<double>::min();
        double hhi = h(hi);
        ++probes;
        while (hhi >= 0.0) {
            const double next = hi * 1e-2;
            if (-next < floor || probes >= max_bracket_probes) {
                std::ostringstream msg;
                msg << "bound state: root lies closer to zero than " << -hi << " (coupling too weak)";
                throw BracketFailure(msg.str());
            }
            lo = hi;
            hi = next;
            hhi = h(hi);
            ++probes;
        }
    }

    int it = 0;
    std::optional<double> exact;
    for (; it < max_bisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double hm = h(mid);
        if (hm == 0.0) {
            exact = mid;
            break;
        }
        (hm > 0.0 ? lo : hi) = mid;
    }

    double e = 0.0;
    if (exact) {
        e = *exact;
        r.residual = 0.0;
    } else {
        // both ends straddle the root; keep the one with the smaller residual
        const double rlo = std::abs(h(lo));
        const double rhi = std::abs(h(hi));
        e = rlo <= rhi ? lo : hi;
        r.residual = std::min(rlo, rhi);
    }
    r.exists = true;
    r.energy = e;
    r.lo = e <= lo ? std::nextafter(e, -std::numeric_limits<double>::infinity()) : lo;
    r.hi = e >= hi ? std::nextafter(e, 0.0) : hi;
    r.iterations = it;
    r.probes = probes;
    return r;
}

} // namespace qspeed::bound_state
