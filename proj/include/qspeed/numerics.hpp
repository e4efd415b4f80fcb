#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace qspeed::numerics {

namespace detail {

template <class Func>
double simpson_step(const Func& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth, int& evaluations)
{
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    evaluations += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol || m == a || m == b)
        return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, evaluations)
         + simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, evaluations);
}

} // namespace detail

struct QuadratureResult
{
    double value = 0.0;
    int evaluations = 0;
};

/// Adaptive Simpson with Richardson correction. `tol` is absolute; recursion
/// stops at `max_depth` (accuracy degrades silently past that point).
template <class Func>
QuadratureResult adaptive_simpson(const Func& f, double a, double b, double tol, int max_depth = 50)
{
    QuadratureResult r;
    if (a == b)
        return r;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    r.evaluations = 3;
    r.value = detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth, r.evaluations);
    return r;
}

/// Bisection on a bracket [lo, hi] with f(lo), f(hi) of opposite sign.
/// Stops at width `xtol` or when the midpoint no longer separates the ends.
template <class Func>
double bisect(const Func& f, double lo, double hi, double xtol, int max_iterations = 200)
{
    double flo = f(lo);
    for (int i = 0; i < max_iterations && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Interior sign changes of `f` sampled on `samples + 1` uniform points of
/// [a, b], each refined by bisection to `xtol`. Exact zeros on grid points
/// count when the sign differs on both sides. The endpoints are never reported.
template <class Func>
std::vector<double> sign_changes(const Func& f, double a, double b, int samples, double xtol)
{
    std::vector<double> roots;
    const double h = (b - a) / samples;
    // first nonzero sample decides the running sign; f(a) is often exactly 0
    double prev_t = a;
    double prev_f = f(a);
    for (int i = 1; i <= samples; ++i) {
        const double t = i == samples ? b : a + i * h;
        const double ft = f(t);
        if (ft == 0.0)
            continue;
        if (prev_f != 0.0 && (ft > 0.0) != (prev_f > 0.0))
            roots.push_back(bisect(f, prev_t, t, xtol));
        prev_t = t;
        prev_f = ft;
    }
    return roots;
}

} // namespace qspeed::numerics
