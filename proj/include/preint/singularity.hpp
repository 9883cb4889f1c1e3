#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "preint/integrand.hpp"

namespace preint {

/// Thresholds for "= 0" and "!= 0" tests. Quantities that go through
/// central differences use the looser `fd_tol`.
struct ConditionTolerances {
    double analytic_tol = 1e-8;
    double fd_tol = 1e-5;
    double fd_step = 1e-5;
};

/// Which hypotheses hold at a candidate point y* for preintegration axis j:
///   d1_zero            dphi/dy_j(y*) = 0
///   d2_nonzero         d2phi/dy_j^2(y*) != 0
///   grad_nonzero       grad phi(y*) != 0
///   grad_dpsi_nonzero  grad psi(y*) != 0, psi = dphi/dy_j
///   not_parallel       grad phi(y*) and grad psi(y*) not parallel
struct SqrtConditions {
    bool d1_zero = false;
    bool d2_nonzero = false;
    bool grad_nonzero = false;
    bool grad_dpsi_nonzero = false;
    bool not_parallel = false;

    /// Isolated square-root singularity at t = phi(y*).
    bool isolated_sqrt() const noexcept { return d1_zero && d2_nonzero && grad_nonzero; }
    /// Singular levels fill an interval of t around phi(y*).
    bool level_family() const noexcept {
        return d1_zero && grad_nonzero && grad_dpsi_nonzero && not_parallel;
    }
};

struct CriticalPoint {
    std::vector<double> y_star;
    std::size_t axis = 0;
    double t_star = 0.0;  ///< phi(y*)
    SqrtConditions conds;
    std::vector<double> grad;       ///< grad phi(y*)
    std::vector<double> grad_dpsi;  ///< grad (dphi/dy_j)(y*), mixed entries by central differences
};

CriticalPoint check_sqrt_conditions(const Integrand& phi, std::span<const double> y_star,
                                    std::size_t axis, const ConditionTolerances& tol = {});

/// grad (dphi/dy_axis) at y: the diagonal entry is analytic (d2), the mixed
/// entries are central differences of d1 with step h.
std::vector<double> gradient_of_axis_derivative(const Integrand& phi,
                                                std::span<const double> y, std::size_t axis,
                                                double h = 1e-5);

enum class Side { Right, Left, Both };

std::string_view to_string(Side side) noexcept;

/// Local model of the singular curve near y*. Along the probe line
/// y_{-j}(s) = y*_{-j} + s u, the level curve is y_j-graph
/// s = zeta(y_j) with zeta''(y_j*) = -phi_jj / (grad_{-j} phi . u), and
///   (P_j f_t)(s) - (P_j f_t)(0) ~ +-amplitude * sqrt(|s|),
///   amplitude = 2 c rho(y_j*),  c = sqrt(2 / |zeta''|),
/// on the Right side when zeta'' > 0, on the Left otherwise.
struct SqrtPrediction {
    double zeta2 = 0.0;
    double c = 0.0;
    double amplitude = 0.0;
    Side side = Side::Right;
    double directional_derivative = 0.0;  ///< grad_{-j} phi(y*) . u
};

/// Prediction along the unit direction `direction` (length d - 1, the
/// coordinates other than `axis`). Throws OrthogonalGradientError when the
/// direction is orthogonal to grad_{-j} phi(y*) (|.| <= 1e-8).
SqrtPrediction predict_sqrt_singularity(const Integrand& phi, std::span<const double> y_star,
                                        std::size_t axis,
                                        std::span<const double> direction);

/// Two-dimensional slice form: the probe runs along the first coordinate
/// other than `axis`.
SqrtPrediction zeta_second_derivative(const Integrand& phi, std::span<const double> y_star,
                                      std::size_t axis = 0);

struct LevelPointOptions {
    double value_tol = 1e-10;  ///< |phi - t|
    double d1_tol = 1e-8;      ///< |dphi/dy_j|
    double radius = 1.0;       ///< neighbourhood of y*
    int max_iter = 100;
    double fd_step = 1e-5;
};

/// A point y(t) near y* with phi(y(t)) = t and dphi/dy_j(y(t)) = 0, by
/// damped Gauss-Newton with minimal-norm steps on the 2 x d system, started
/// at y*. Throws OutOfNeighborhoodError on leaving the ball of `radius`
/// around y*, on stagnation, or after max_iter iterations.
std::vector<double> find_level_point(const Integrand& phi, std::span<const double> y_star,
                                     std::size_t axis, double t,
                                     const LevelPointOptions& opt = {});

/// Runs find_level_point from every start and returns the distinct points
/// found (closer than `merge_tol` counts as the same point).
std::vector<std::vector<double>> search_level_points(
    const Integrand& phi, std::span<const std::vector<double>> starts, std::size_t axis,
    double t, double merge_tol = 1e-6, const LevelPointOptions& opt = {});

struct SingularityReport {
    double location = 0.0;
    double exponent = 0.0;   ///< +infinity when g is flat on the grid
    double amplitude = 0.0;  ///< exp(intercept) of the log-log fit
    Side side = Side::Right;
    double residual = 0.0;   ///< max |log deviation| from the fitted line
    std::vector<std::pair<double, double>> fit_points;  ///< (h, g(x0 +- h) - g(x0)) used

    bool flat() const noexcept;
};

/// h = 2^-k for k = 4, ..., 20.
std::vector<double> default_h_grid();

/// Fits |g(x0 + sigma h) - g(x0)| ~ amplitude * h^alpha by least squares in
/// log-log coordinates. The two largest and two smallest h are discarded
/// before the fit (higher-order terms and cancellation respectively), as
/// are zero increments; fewer than two usable points reports a flat
/// function with alpha = +infinity.
SingularityReport estimate_exponent(const std::function<double(double)>& g, double x0,
                                    Side side, std::span<const double> h_grid);

SingularityReport estimate_exponent(const std::function<double(double)>& g, double x0,
                                    Side side);

/// Fits exponents on both sides at n equispaced points of [lo, hi] and
/// returns the points whose exponent falls below `alpha_threshold` on
/// either side. A smooth g gives alpha >= 1 everywhere.
std::vector<SingularityReport> detect_singularities(const std::function<double(double)>& g,
                                                    double lo, double hi, int n,
                                                    double alpha_threshold = 0.9);

}  // namespace preint
