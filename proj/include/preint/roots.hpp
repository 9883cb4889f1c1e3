#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "preint/errors.hpp"

namespace preint {

struct RootOptions {
    double f_tol = 1e-12;  ///< accepted residual if the bracket cannot shrink further
    int max_iter = 100;
};

/// Newton's method confined to a sign-change bracket [lo, hi]. A Newton step
/// that leaves the bracket, or fails to halve the previous step, is replaced
/// by bisection, so the iterate never leaves the bracket.
///
/// Iterates until the step or the bracket is at rounding level. Throws
/// RootRefinementError (carrying the last bracket) if max_iter is exhausted
/// with |f| > f_tol, and EvaluationError if f returns NaN.
template <class F, class DF>
double safeguarded_newton(F&& f, DF&& df, double lo, double hi, const RootOptions& opt = {}) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    if (lo > hi) std::swap(lo, hi);
    const double flo = f(lo);
    const double fhi = f(hi);
    if (std::isnan(flo) || std::isnan(fhi)) {
        throw EvaluationError("safeguarded_newton: NaN at bracket endpoint");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw DomainError("safeguarded_newton: root is not bracketed");
    }
    const bool rising = flo < 0.0;

    double x = 0.5 * (lo + hi);
    double step_old = hi - lo;
    double step = step_old;
    double fx = f(x);
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if (std::isnan(fx)) throw EvaluationError("safeguarded_newton: NaN inside bracket");
        if (fx == 0.0) return x;
        if ((fx < 0.0) == rising) {
            lo = x;
        } else {
            hi = x;
        }
        const double dfx = df(x);
        double next = x - fx / dfx;
        const bool newton_ok = std::isfinite(next) && next > lo && next < hi &&
                               std::abs(2.0 * fx) <= std::abs(step_old * dfx);
        step_old = step;
        if (!newton_ok) next = 0.5 * (lo + hi);
        step = next - x;
        const double scale = std::max(std::abs(next), tiny);
        if (std::abs(step) <= 2.0 * eps * scale || hi - lo <= 4.0 * eps * scale) {
            return next;
        }
        x = next;
        fx = f(x);
    }
    if (std::abs(fx) <= opt.f_tol) return x;
    throw RootRefinementError("safeguarded_newton: no convergence in bracket [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]",
                              lo, hi);
}

}  // namespace preint
