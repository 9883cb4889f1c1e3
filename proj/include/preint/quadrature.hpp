#pragma once

#include <functional>

namespace preint {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite [a, b]:
/// the interval with the largest embedded error estimate is bisected until
/// the summed estimate drops below abs_tol. Throws AccuracyError after
/// max_intervals subdivisions.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double abs_tol = 1e-10,
                                    int max_intervals = 500);

}  // namespace preint
