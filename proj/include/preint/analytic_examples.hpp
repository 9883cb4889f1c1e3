#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "preint/integrand.hpp"

namespace preint {

/// The four two-dimensional test functions with known preintegrals:
///   Parabola   phi = y2 - y1^2
///   Hyperbola  phi = y2^2 - y1^2 - 1
///   Cross      phi = y2^2 - y1^2
///   Cubic      phi = y1^3 - y2
enum class AnalyticExample { Parabola, Hyperbola, Cross, Cubic };

std::string_view to_string(AnalyticExample id) noexcept;
std::optional<AnalyticExample> parse_example(std::string_view name) noexcept;

/// phi for `id` with exact derivatives.
std::shared_ptr<const Integrand> example_integrand(AnalyticExample id);

/// Closed-form (P_axis f_t)(coord) for the jump integrand ind(phi - t), where
/// `coord` is the single remaining coordinate. Supported: every example with
/// axis 0, and Parabola with axis 1. Otherwise UnsupportedCombinationError.
double oracle_preintegral(AnalyticExample id, std::size_t axis, double t, double coord);

/// Whether oracle_preintegral has a closed form for (id, axis).
bool has_oracle(AnalyticExample id, std::size_t axis) noexcept;

/// Closed form of the integral of (y2 - y1^2) rho(y1) over |y1| < sqrt(y2),
/// i.e. the kink preintegral of the Parabola along axis 0 at t = 0:
///   (y2 - 1) (Phi(s) - Phi(-s)) + 2 s rho(s),  s = sqrt(y2).
double oracle_kink_preintegral(double coord);

}  // namespace preint
