#pragma once

// Test-side oracles, independent of the library's evaluation paths.

#include <cmath>
#include <functional>

namespace oracles {

/// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 40) {
    const double c = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fc = f(c);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fhi, double fmid, double eps,
            int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double s = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        const double sl = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double sr = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(sl + sr - s) < 15.0 * eps) return sl + sr + (sl + sr - s) / 15.0;
        return rec(lo, mid, flo, fmid, flm, eps / 2.0, d - 1) +
               rec(mid, hi, fmid, fhi, frm, eps / 2.0, d - 1);
    };
    return rec(a, b, fa, fb, fc, tol, depth);
}

/// Fine quadrature of a function with one integrable singularity at s in
/// (a, b): splits at s and grades geometrically toward it.
inline double singular_quadrature(const std::function<double(double)>& f, double a, double b,
                                  double s, double tol = 1e-12) {
    double total = 0.0;
    auto one_side = [&](double from, double to) {  // singularity at `from`
        const double len = std::abs(to - from);
        if (len < 1e-15) return 0.0;
        double acc = 0.0;
        double hi = to;
        for (int k = 0; k < 60; ++k) {
            const double lo = from + (hi - from) * 0.5;
            acc += adaptive_simpson(f, std::min(lo, hi), std::max(lo, hi), tol);
            hi = lo;
            if (std::abs(hi - from) < 1e-16 * len) break;
        }
        return acc;
    };
    total += one_side(s, a);
    total += one_side(s, b);
    return total;
}

/// Poisson kernel.
inline double poisson_kernel(double r, double x) {
    return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(x) + r * r);
}

}  // namespace oracles
