#pragma once

namespace preint::normal {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density exp(-y^2/2)/sqrt(2 pi).
double pdf(double y) noexcept;

/// Standard normal distribution function. Accepts +-infinity.
double cdf(double y) noexcept;

/// Upper tail 1 - cdf(y), computed without cancellation.
double ccdf(double y) noexcept;

/// Normal mass of the interval (a, b); endpoints may be infinite.
/// Evaluated on whichever tail keeps the difference well conditioned.
double mass(double a, double b) noexcept;

/// Quantile function. Throws DomainError unless 0 < p < 1.
double inv_cdf(double p);

}  // namespace preint::normal
