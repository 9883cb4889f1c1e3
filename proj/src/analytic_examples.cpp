#include "preint/analytic_examples.hpp"

#include <cmath>
#include <string>

#include "preint/errors.hpp"
#include "preint/normal.hpp"

namespace preint {

namespace {

class ExampleIntegrand final : public Integrand {
public:
    explicit ExampleIntegrand(AnalyticExample id) : id_(id) {}

    std::size_t dim() const override { return 2; }

    double value(std::span<const double> y) const override {
        const double a = y[0];
        const double b = y[1];
        switch (id_) {
            case AnalyticExample::Parabola: return b - a * a;
            case AnalyticExample::Hyperbola: return b * b - a * a - 1.0;
            case AnalyticExample::Cross: return b * b - a * a;
            case AnalyticExample::Cubic: return a * a * a - b;
        }
        return 0.0;
    }

    double d1(std::size_t axis, std::span<const double> y) const override {
        const double a = y[0];
        const double b = y[1];
        switch (id_) {
            case AnalyticExample::Parabola: return axis == 0 ? -2.0 * a : 1.0;
            case AnalyticExample::Hyperbola:
            case AnalyticExample::Cross: return axis == 0 ? -2.0 * a : 2.0 * b;
            case AnalyticExample::Cubic: return axis == 0 ? 3.0 * a * a : -1.0;
        }
        return 0.0;
    }

    double d2(std::size_t axis, std::span<const double> y) const override {
        switch (id_) {
            case AnalyticExample::Parabola: return axis == 0 ? -2.0 : 0.0;
            case AnalyticExample::Hyperbola:
            case AnalyticExample::Cross: return axis == 0 ? -2.0 : 2.0;
            case AnalyticExample::Cubic: return axis == 0 ? 6.0 * y[0] : 0.0;
        }
        return 0.0;
    }

private:
    AnalyticExample id_;
};

// Normal mass of (-s, s) for s = sqrt(r), zero when r <= 0.
double symmetric_mass(double r) {
    if (r <= 0.0) return 0.0;
    const double s = std::sqrt(r);
    return std::erf(s / std::sqrt(2.0));
}

}  // namespace

std::string_view to_string(AnalyticExample id) noexcept {
    switch (id) {
        case AnalyticExample::Parabola: return "parabola";
        case AnalyticExample::Hyperbola: return "hyperbola";
        case AnalyticExample::Cross: return "cross";
        case AnalyticExample::Cubic: return "cubic";
    }
    return "?";
}

std::optional<AnalyticExample> parse_example(std::string_view name) noexcept {
    for (auto id : {AnalyticExample::Parabola, AnalyticExample::Hyperbola,
                    AnalyticExample::Cross, AnalyticExample::Cubic}) {
        if (name == to_string(id)) return id;
    }
    return std::nullopt;
}

std::shared_ptr<const Integrand> example_integrand(AnalyticExample id) {
    return std::make_shared<ExampleIntegrand>(id);
}

bool has_oracle(AnalyticExample id, std::size_t axis) noexcept {
    return axis == 0 || (axis == 1 && id == AnalyticExample::Parabola);
}

double oracle_preintegral(AnalyticExample id, std::size_t axis, double t, double coord) {
    if (!has_oracle(id, axis)) {
        throw UnsupportedCombinationError("no closed-form preintegral for " +
                                          std::string(to_string(id)) + " along axis " +
                                          std::to_string(axis));
    }
    if (axis == 1) {
        // y2 > y1^2 + t
        return normal::ccdf(coord * coord + t);
    }
    switch (id) {
        case AnalyticExample::Parabola: return symmetric_mass(coord - t);
        case AnalyticExample::Hyperbola: return symmetric_mass(coord * coord - 1.0 - t);
        case AnalyticExample::Cross: return symmetric_mass(coord * coord - t);
        case AnalyticExample::Cubic: return normal::ccdf(std::cbrt(coord + t));
    }
    return 0.0;
}

double oracle_kink_preintegral(double coord) {
    if (coord <= 0.0) return 0.0;
    const double s = std::sqrt(coord);
    return (coord - 1.0) * symmetric_mass(coord) + 2.0 * s * normal::pdf(s);
}

}  // namespace preint
