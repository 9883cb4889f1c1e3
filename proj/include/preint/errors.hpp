#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace preint {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The integrand returned NaN where a value was required.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A bracketed root did not converge; carries the final bracket.
class RootRefinementError : public Error {
public:
    RootRefinementError(const std::string& what, double lo, double hi)
        : Error(what), lo_(lo), hi_(hi) {}

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

/// The convex fast path met a stationary point with non-positive curvature.
class ConvexityError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature hit its subdivision budget before the tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate, double error)
        : Error(what), estimate_(estimate), error_(error) {}

    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

/// No closed-form preintegral exists for the requested (example, axis).
class UnsupportedCombinationError : public Error {
public:
    using Error::Error;
};

/// The derivative along the probe direction vanishes, so the singular curve
/// cannot be written as a graph over the preintegration variable.
class OrthogonalGradientError : public Error {
public:
    using Error::Error;
};

/// Level-point search left the neighbourhood or ran out of iterations.
class OutOfNeighborhoodError : public Error {
public:
    using Error::Error;
};

/// A cubature node produced a non-finite integrand value.
class PoisonedEvaluationError : public Error {
public:
    PoisonedEvaluationError(const std::string& what, std::size_t shift, std::size_t point)
        : Error(what), shift_(shift), point_(point) {}

    std::size_t shift() const noexcept { return shift_; }
    std::size_t point() const noexcept { return point_; }

private:
    std::size_t shift_;
    std::size_t point_;
};

/// Malformed generating-vector file.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Eigen-solver or other matrix factorisation failure.
class FactorizationError : public Error {
public:
    using Error::Error;
};

}  // namespace preint
