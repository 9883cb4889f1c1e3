#include "preint/integrand.hpp"

#include <utility>

#include "preint/errors.hpp"

namespace preint {

std::vector<double> Integrand::gradient(std::span<const double> y) const {
    std::vector<double> g(dim());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = d1(k, y);
    return g;
}

namespace {

class CopyingLine final : public LineFunction {
public:
    CopyingLine(const Integrand& f, std::size_t axis, std::span<const double> y)
        : f_(f), axis_(axis), y_(y.begin(), y.end()) {}

    double value(double x) const override { return f_.value(at(x)); }
    double d1(double x) const override { return f_.d1(axis_, at(x)); }
    double d2(double x) const override { return f_.d2(axis_, at(x)); }

private:
    // Each call gets its own buffer so a line may be shared across threads.
    std::vector<double> at(double x) const {
        std::vector<double> p = y_;
        p[axis_] = x;
        return p;
    }

    const Integrand& f_;
    std::size_t axis_;
    std::vector<double> y_;
};

}  // namespace

std::unique_ptr<LineFunction> Integrand::along(std::size_t axis,
                                               std::span<const double> y) const {
    if (axis >= dim() || y.size() != dim()) {
        throw DomainError("Integrand::along: axis or point dimension out of range");
    }
    return std::make_unique<CopyingLine>(*this, axis, y);
}

FunctionIntegrand::FunctionIntegrand(std::size_t dim, ValueFn value, AxisFn d1, AxisFn d2)
    : dim_(dim), value_(std::move(value)), d1_(std::move(d1)), d2_(std::move(d2)) {
    if (dim_ == 0) throw DomainError("FunctionIntegrand: dimension must be positive");
}

std::vector<double> embed(std::size_t axis, double x, std::span<const double> rest) {
    if (axis > rest.size()) throw DomainError("embed: axis out of range");
    std::vector<double> y;
    y.reserve(rest.size() + 1);
    y.insert(y.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(axis));
    y.push_back(x);
    y.insert(y.end(), rest.begin() + static_cast<std::ptrdiff_t>(axis), rest.end());
    return y;
}

std::vector<double> drop_axis(std::size_t axis, std::span<const double> y) {
    if (axis >= y.size()) throw DomainError("drop_axis: axis out of range");
    std::vector<double> rest;
    rest.reserve(y.size() - 1);
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (k != axis) rest.push_back(y[k]);
    }
    return rest;
}

}  // namespace preint
