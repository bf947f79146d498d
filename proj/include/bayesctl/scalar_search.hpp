#pragma once

// Derivative-free bracketed minimization (golden section with parabolic
// steps, after Brent) and a sign-change bisection used to polish minimizers.

#include <cmath>
#include <utility>

#include "bayesctl/errors.hpp"

namespace bayesctl {

struct ScalarMinimum {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

// Minimizes f on [lo, hi] to an absolute tolerance `tol` in x.
template <typename F>
ScalarMinimum brent_minimize(F&& f, double lo, double hi, double tol, int max_iters) {
    constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5)/2
    constexpr double eps = 1.4901161193847656e-08; // sqrt(machine eps)
    double a = lo;
    double b = hi;
    double x = a + golden * (b - a);
    double w = x;
    double v = x;
    double fx = f(x);
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;
    for (int iter = 1; iter <= max_iters; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol1 = eps * std::abs(x) + tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) return {x, fx, iter};

        bool golden_step = true;
        if (std::abs(e) > tol1) {
            // Parabola through (x, fx), (w, fw), (v, fv).
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    throw IterationLimitError("bracketed minimization hit the iteration cap");
}

// Root of g on [lo, hi] by bisection; g(lo) and g(hi) must differ in sign.
template <typename G>
double bisect_root(G&& g, double lo, double hi, double xtol, int max_iters = 200) {
    double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0.0) == (ghi > 0.0)) throw BracketError("bisection endpoints do not bracket a sign change");
    for (int i = 0; i < max_iters && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace bayesctl
