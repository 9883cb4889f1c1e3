#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "preint/integrand.hpp"

namespace preint {

/// Controls the line scan and root refinement.
///
/// The scan covers [-L, L]; normal mass outside is below 2e-23, so roots
/// beyond it are treated as infinite. `scan_points` is the resolution limit:
/// positivity intervals narrower than the grid spacing are found only when
/// they straddle a critical point of phi along the line.
struct RootFinderConfig {
    double scan_halfwidth = 10.0;
    int scan_points = 1024;
    double root_tol = 1e-12;
    int max_iter = 100;

    /// Throws DomainError unless L > 0, scan_points >= 16, root_tol > 0.
    void validate() const;
};

struct Interval {
    double a;  ///< may be -infinity
    double b;  ///< may be +infinity
};

/// {x : phi(x) > t} along one coordinate line, as sorted disjoint intervals.
struct IntervalDecomposition {
    std::vector<Interval> intervals;
    std::vector<double> roots;  ///< finite interval endpoints, sorted
    bool saturated = false;     ///< the whole line is positive

    bool empty() const noexcept { return intervals.empty(); }
};

/// Positivity decomposition of phi - t on a line. Sign changes of phi - t
/// on the grid are refined by safeguarded Newton; sign changes of phi' are
/// refined first and the stationary value is sampled, so narrow humps
/// around a turning point are not missed. An isolated touch
/// (|phi - t| <= root_tol without a sign change) contributes nothing.
IntervalDecomposition decompose_line(const LineFunction& line, double t,
                                     const RootFinderConfig& cfg = {});

/// decompose_line along `axis` with the other coordinates `y_minus_j`
/// (length d - 1, in axis order with `axis` removed).
IntervalDecomposition decompose(const IndicatorSpec& spec, std::size_t axis,
                                std::span<const double> y_minus_j,
                                const RootFinderConfig& cfg = {});

/// Normal mass of the decomposition.
double jump_mass(const IntervalDecomposition& decomposition) noexcept;

/// (P_axis ind(phi - t))(y_minus_j) in [0, 1] for an arbitrary smooth phi.
double preintegrate_jump(const IndicatorSpec& spec, std::size_t axis,
                         std::span<const double> y_minus_j,
                         const RootFinderConfig& cfg = {});

/// Unique minimiser of a line function that is strictly convex, located by
/// geometric expansion from 0 (factor 2, from step 1) until phi' changes
/// sign, then safeguarded Newton on phi' using phi''. Returns nullopt when
/// phi' keeps one sign out to the scan half-width, i.e. the line is
/// monotone over the mass-carrying range.
std::optional<double> find_turning_point(const LineFunction& line,
                                         const RootFinderConfig& cfg = {});

/// Preintegral of ind(phi - t) along a strictly convex line: 1 if the
/// minimum is >= t, else Phi(xi_a) + 1 - Phi(xi_b) for the two roots
/// around the minimiser. Lines that are monotone over the mass-carrying
/// range reduce to one root. Throws ConvexityError if phi'' <= 0 at the
/// turning point.
double convex_jump_line(const LineFunction& line, double t,
                        const RootFinderConfig& cfg = {});

/// convex_jump_line along `axis`. Caller asserts strict convexity along
/// the axis; it is checked at the turning point.
double preintegrate_convex(const IndicatorSpec& spec, std::size_t axis,
                           std::span<const double> y_minus_j,
                           const RootFinderConfig& cfg = {});

/// Integral of (phi - t)^+ rho along `axis` by adaptive Gauss-Kronrod on
/// each positivity interval (absolute tolerance 1e-10 per interval).
/// Infinite ends are cut where (phi - t) rho < 1e-16 * scale.
double preintegrate_kink(const IndicatorSpec& spec, std::size_t axis,
                         std::span<const double> y_minus_j,
                         const RootFinderConfig& cfg = {});

/// preintegrate_jump or preintegrate_kink according to spec.flavor.
double preintegrate(const IndicatorSpec& spec, std::size_t axis,
                    std::span<const double> y_minus_j, const RootFinderConfig& cfg = {});

}  // namespace preint
