#pragma once

#include <cmath>
#include <string>

#include "asrf/errors.hpp"

namespace asrf::math {

// Bracketed scalar root finder for continuous, strictly monotone functions:
// bisection hardened with secant acceleration. The secant step is used while
// it stays strictly inside the bracket and keeps shrinking it; otherwise the
// next step bisects. Deterministic for identical inputs.
//
// Returns x with bracket width <= tol (midpoint of the final bracket), or the
// exact argument when f evaluates to zero. Throws BracketError when f(lo) and
// f(hi) do not straddle zero, ConvergenceError on iteration exhaustion.
template <class F>
double find_root_monotone(F&& f, double lo, double hi, double tol, int max_iter = 200) {
    if (!(tol > 0.0)) throw DomainError("find_root_monotone: tol must be positive");
    if (!(lo < hi)) throw DomainError("find_root_monotone: empty bracket");
    double fa = f(lo);
    double fb = f(hi);
    if (fa == 0.0) return lo;
    if (fb == 0.0) return hi;
    if ((fa < 0.0) == (fb < 0.0))
        throw BracketError("find_root_monotone: no sign change on [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    double a = lo, b = hi;
    bool force_bisect = false;
    for (int it = 0; it < max_iter; ++it) {
        double width = b - a;
        if (width <= tol) return 0.5 * (a + b);
        double x;
        if (force_bisect) {
            x = a + 0.5 * width;
        } else {
            x = a - fa * (width / (fb - fa));  // secant through the bracket ends
            if (!(x > a && x < b)) x = a + 0.5 * width;
        }
        double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (fa < 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        force_bisect = (b - a) > 0.75 * width;  // poor shrink: bisect next round
    }
    throw ConvergenceError("find_root_monotone: no convergence after " +
                           std::to_string(max_iter) + " iterations");
}

// Default bracket and tolerance for the systematic-factor solvers. |y| > 12
// corresponds to scenario probabilities below representable tail mass.
struct SolveOptions {
    double bracket_lo = -12.0;
    double bracket_hi = 12.0;
    double tol = 1e-10;
};

}  // namespace asrf::math
