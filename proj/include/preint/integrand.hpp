#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace preint {

/// The smooth function phi restricted to one coordinate line, all other
/// coordinates held fixed. Root finding and quadrature only ever see this.
class LineFunction {
public:
    virtual ~LineFunction() = default;

    virtual double value(double x) const = 0;
    virtual double d1(double x) const = 0;
    virtual double d2(double x) const = 0;
};

/// A smooth function phi: R^d -> R with coordinate-wise first and second
/// derivatives. Axes are zero-based throughout the library.
///
/// Implementations must be immutable after construction; every member is
/// called concurrently from cubature workers.
class Integrand {
public:
    virtual ~Integrand() = default;

    virtual std::size_t dim() const = 0;
    virtual double value(std::span<const double> y) const = 0;
    virtual double d1(std::size_t axis, std::span<const double> y) const = 0;
    virtual double d2(std::size_t axis, std::span<const double> y) const = 0;

    virtual std::vector<double> gradient(std::span<const double> y) const;

    /// phi(x) along `axis` through the point `y` (the value y[axis] is ignored).
    /// The default copies y and calls the full-dimensional members; models
    /// with cheap line updates override it.
    virtual std::unique_ptr<LineFunction> along(std::size_t axis,
                                                std::span<const double> y) const;
};

/// Integrand assembled from callables. Used for synthetic test functions.
class FunctionIntegrand final : public Integrand {
public:
    using ValueFn = std::function<double(std::span<const double>)>;
    using AxisFn = std::function<double(std::size_t, std::span<const double>)>;

    FunctionIntegrand(std::size_t dim, ValueFn value, AxisFn d1, AxisFn d2);

    std::size_t dim() const override { return dim_; }
    double value(std::span<const double> y) const override { return value_(y); }
    double d1(std::size_t axis, std::span<const double> y) const override {
        return d1_(axis, y);
    }
    double d2(std::size_t axis, std::span<const double> y) const override {
        return d2_(axis, y);
    }

private:
    std::size_t dim_;
    ValueFn value_;
    AxisFn d1_;
    AxisFn d2_;
};

enum class Flavor {
    Jump,  ///< ind(phi - t)
    Kink,  ///< max(phi - t, 0)
};

/// The discontinuous integrand built from a smooth base.
struct IndicatorSpec {
    std::shared_ptr<const Integrand> base;
    double threshold = 0.0;
    Flavor flavor = Flavor::Jump;
};

/// Inserts `x` at position `axis` of `rest` (length d-1), giving a d-vector.
std::vector<double> embed(std::size_t axis, double x, std::span<const double> rest);

/// Removes coordinate `axis` from `y`.
std::vector<double> drop_axis(std::size_t axis, std::span<const double> y);

}  // namespace preint
