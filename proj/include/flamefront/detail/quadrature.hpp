#pragma once

#include <cmath>

namespace flamefront {

namespace detail {

template <class Fn>
double simpson_step(Fn& fn, double a, double fa, double b, double fb, double m, double fm, double whole,
                    double tolerance, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tolerance) {
        return left + right + delta / 15.0;
    }
    return simpson_step(fn, a, fa, m, fm, lm, flm, left, 0.5 * tolerance, depth - 1) +
           simpson_step(fn, m, fm, b, fb, rm, frm, right, 0.5 * tolerance, depth - 1);
}

}  // namespace detail

template <class Fn>
double adaptive_simpson(Fn&& fn, double a, double b, double tolerance, int max_depth) {
    // Split once up front so symmetric bumps that vanish at a, b and the
    // midpoint cannot fool the first error estimate.
    constexpr int kPanels = 8;
    double total = 0.0;
    const double w = (b - a) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
        const double lo = a + p * w;
        const double hi = (p + 1 == kPanels) ? b : lo + w;
        const double mid = 0.5 * (lo + hi);
        const double flo = fn(lo), fhi = fn(hi), fmid = fn(mid);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += detail::simpson_step(fn, lo, flo, hi, fhi, mid, fmid, whole, tolerance / kPanels, max_depth);
    }
    return total;
}

}  // namespace flamefront
