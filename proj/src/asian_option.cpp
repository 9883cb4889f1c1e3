#include "preint/asian_option.hpp"

#include <cmath>
#include <deque>
#include <string>
#include <utility>

#include "preint/errors.hpp"

namespace preint {

namespace {

class AsianLine final : public LineFunction {
public:
    AsianLine(double scale, std::vector<double> base, std::vector<double> slope)
        : scale_(scale), base_(std::move(base)), slope_(std::move(slope)) {}

    double value(double x) const override { return sum(0, x); }
    double d1(double x) const override { return sum(1, x); }
    double d2(double x) const override { return sum(2, x); }

private:
    double sum(int power, double x) const {
        double s = 0.0;
        for (std::size_t k = 0; k < base_.size(); ++k) {
            const double a = slope_[k];
            if (power > 0 && a == 0.0) continue;
            const double w = power == 0 ? 1.0 : (power == 1 ? a : a * a);
            s += w * std::exp(base_[k] + a * x);
        }
        return scale_ * s;
    }

    double scale_;
    std::vector<double> base_;
    std::vector<double> slope_;
};

Matrix standard_factor(std::size_t d, double maturity) {
    Matrix a(d, d);
    const double step = std::sqrt(maturity / static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j <= k; ++j) a(k, j) = step;
    }
    return a;
}

// Row m of the path is a convex combination of the rows of its fixed
// neighbours plus a fresh normal in the next column.
Matrix bridge_factor(std::size_t d, double maturity) {
    Matrix a(d, d);
    const double dt = maturity / static_cast<double>(d);
    auto row_of = [&](std::size_t date) { return date - 1; };

    a(row_of(d), 0) = std::sqrt(maturity);
    std::size_t column = 1;
    std::deque<std::pair<std::size_t, std::size_t>> gaps{{0, d}};
    while (!gaps.empty()) {
        const auto [l, r] = gaps.front();
        gaps.pop_front();
        if (r - l < 2) continue;
        const std::size_t m = (l + r + 1) / 2;
        const double tl = static_cast<double>(l) * dt;
        const double tm = static_cast<double>(m) * dt;
        const double tr = static_cast<double>(r) * dt;
        const double wl = (tr - tm) / (tr - tl);
        const double wr = (tm - tl) / (tr - tl);
        for (std::size_t j = 0; j < column; ++j) {
            const double left = l == 0 ? 0.0 : a(row_of(l), j);
            a(row_of(m), j) = wl * left + wr * a(row_of(r), j);
        }
        a(row_of(m), column) = std::sqrt((tm - tl) * (tr - tm) / (tr - tl));
        ++column;
        gaps.emplace_back(l, m);
        gaps.emplace_back(m, r);
    }
    return a;
}

}  // namespace

void MarketParams::validate() const {
    if (!(s0 > 0.0) || !(strike > 0.0) || !(maturity > 0.0) || !(sigma > 0.0)) {
        throw DomainError("S0, K, T and sigma must be positive");
    }
    if (!std::isfinite(rate) || !std::isfinite(s0) || !std::isfinite(strike) ||
        !std::isfinite(maturity) || !std::isfinite(sigma)) {
        throw DomainError("market parameters must be finite");
    }
    if (d < 1) throw DomainError("d must be at least 1");
}

std::string_view to_string(FactorizationKind kind) noexcept {
    switch (kind) {
        case FactorizationKind::Standard: return "standard";
        case FactorizationKind::BrownianBridge: return "bb";
        case FactorizationKind::PCA: return "pca";
    }
    return "?";
}

FactorizationKind parse_factorization(std::string_view name) {
    if (name == "standard") return FactorizationKind::Standard;
    if (name == "bb") return FactorizationKind::BrownianBridge;
    if (name == "pca") return FactorizationKind::PCA;
    throw DomainError("unknown factorization '" + std::string(name) + "'");
}

Matrix brownian_covariance(std::size_t d, double maturity) {
    Matrix s(d, d);
    const double dt = maturity / static_cast<double>(d);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) s(k, l) = static_cast<double>(std::min(k, l) + 1) * dt;
    }
    return s;
}

CovarianceFactorization build_factorization(const MarketParams& params, FactorizationKind kind) {
    params.validate();
    CovarianceFactorization f;
    f.kind = kind;
    const std::size_t d = params.d;
    switch (kind) {
        case FactorizationKind::Standard:
            f.a = standard_factor(d, params.maturity);
            break;
        case FactorizationKind::BrownianBridge:
            f.a = bridge_factor(d, params.maturity);
            break;
        case FactorizationKind::PCA: {
            auto eig = symmetric_eigen(brownian_covariance(d, params.maturity));
            f.a = Matrix(d, d);
            for (std::size_t j = 0; j < d; ++j) {
                const double lambda = eig.values[j];
                if (!(lambda > 0.0)) {
                    throw FactorizationError("covariance eigenvalue " + std::to_string(j) +
                                             " is not positive");
                }
                const double sign = eig.vectors(0, j) < 0.0 ? -1.0 : 1.0;
                const double scale = sign * std::sqrt(lambda);
                for (std::size_t k = 0; k < d; ++k) f.a(k, j) = scale * eig.vectors(k, j);
            }
            f.eigenvalues = std::move(eig.values);
            break;
        }
    }
    return f;
}

AsianIntegrand::AsianIntegrand(MarketParams params, CovarianceFactorization fact)
    : params_(params), fact_(std::move(fact)) {
    params_.validate();
    if (fact_.a.rows() != params_.d || fact_.a.cols() != params_.d) {
        throw DomainError("factorization size does not match d");
    }
    const double dt = params_.maturity / static_cast<double>(params_.d);
    const double mu = params_.rate - 0.5 * params_.sigma * params_.sigma;
    for (std::size_t k = 0; k < params_.d; ++k) {
        drift_.push_back(mu * static_cast<double>(k + 1) * dt);
    }
}

std::vector<double> AsianIntegrand::exponents(std::span<const double> y) const {
    if (y.size() != params_.d) throw DomainError("point dimension does not match d");
    std::vector<double> e(params_.d);
    for (std::size_t k = 0; k < params_.d; ++k) {
        const double* row = fact_.a.row(k);
        double s = 0.0;
        for (std::size_t j = 0; j < params_.d; ++j) s += row[j] * y[j];
        e[k] = drift_[k] + params_.sigma * s;
    }
    return e;
}

double AsianIntegrand::weighted_sum(std::size_t axis, int power,
                                    std::span<const double> y) const {
    if (axis >= params_.d) throw DomainError("axis out of range");
    const auto e = exponents(y);
    double s = 0.0;
    for (std::size_t k = 0; k < params_.d; ++k) {
        const double a = params_.sigma * fact_.a(k, axis);
        if (a == 0.0) continue;
        s += (power == 1 ? a : a * a) * std::exp(e[k]);
    }
    return params_.s0 / static_cast<double>(params_.d) * s;
}

double AsianIntegrand::value(std::span<const double> y) const {
    const auto e = exponents(y);
    double s = 0.0;
    for (double ek : e) s += std::exp(ek);
    return params_.s0 / static_cast<double>(params_.d) * s;
}

double AsianIntegrand::d1(std::size_t axis, std::span<const double> y) const {
    return weighted_sum(axis, 1, y);
}

double AsianIntegrand::d2(std::size_t axis, std::span<const double> y) const {
    return weighted_sum(axis, 2, y);
}

std::unique_ptr<LineFunction> AsianIntegrand::along(std::size_t axis,
                                                    std::span<const double> y) const {
    if (axis >= params_.d || y.size() != params_.d) {
        throw DomainError("along: axis or point dimension out of range");
    }
    std::vector<double> base(params_.d);
    std::vector<double> slope(params_.d);
    for (std::size_t k = 0; k < params_.d; ++k) {
        const double* row = fact_.a.row(k);
        double s = 0.0;
        for (std::size_t j = 0; j < params_.d; ++j) {
            if (j != axis) s += row[j] * y[j];
        }
        base[k] = drift_[k] + params_.sigma * s;
        slope[k] = params_.sigma * row[axis];
    }
    return std::make_unique<AsianLine>(params_.s0 / static_cast<double>(params_.d),
                                       std::move(base), std::move(slope));
}

double phi_asian(const MarketParams& params, const CovarianceFactorization& fact,
                 std::span<const double> y) {
    return AsianIntegrand(params, fact).value(y);
}

double phi_asian_d1(const MarketParams& params, const CovarianceFactorization& fact,
                    std::size_t axis, std::span<const double> y) {
    return AsianIntegrand(params, fact).d1(axis, y);
}

double phi_asian_d2(const MarketParams& params, const CovarianceFactorization& fact,
                    std::size_t axis, std::span<const double> y) {
    return AsianIntegrand(params, fact).d2(axis, y);
}

std::vector<Monotonicity> classify_monotonicity(const CovarianceFactorization& fact) {
    std::vector<Monotonicity> out;
    for (std::size_t j = 0; j < fact.a.cols(); ++j) {
        bool negative = false;
        bool positive = false;
        for (std::size_t k = 0; k < fact.a.rows(); ++k) {
            negative = negative || fact.a(k, j) < 0.0;
            positive = positive || fact.a(k, j) > 0.0;
        }
        out.push_back(positive && !negative ? Monotonicity::MonotoneIncreasing
                                            : Monotonicity::NotMonotone);
    }
    return out;
}

Estimate price_digital_asian(const MarketParams& params, const CovarianceFactorization& fact,
                             const PricingRequest& request, EstimatorConfig cfg,
                             const GeneratingVector& gv) {
    auto phi = std::make_shared<const AsianIntegrand>(params, fact);
    const double strike = params.strike;
    Estimate e;
    switch (request.method) {
        case PricingMethod::MC:
        case PricingMethod::PlainQMC: {
            cfg.dim = params.d;
            auto payoff = [&](std::span<const double> y) {
                return phi->value(y) - strike > 0.0 ? 1.0 : 0.0;
            };
            e = request.method == PricingMethod::MC ? integrate_mc(payoff, cfg)
                                                    : integrate_qmc(payoff, cfg, gv);
            break;
        }
        case PricingMethod::PreintQMC: {
            if (params.d < 2) throw DomainError("preintegration needs d >= 2");
            if (request.axis >= params.d) throw DomainError("preintegration axis out of range");
            request.roots.validate();
            cfg.dim = params.d - 1;
            auto smoothed = [&](std::span<const double> rest) {
                const auto y = embed(request.axis, 0.0, rest);
                const auto line = phi->along(request.axis, y);
                return convex_jump_line(*line, strike, request.roots);
            };
            e = integrate_qmc(smoothed, cfg, gv);
            break;
        }
    }
    const double discount = std::exp(-params.rate * params.maturity);
    e.value *= discount;
    e.std_error *= discount;
    for (double& m : e.per_shift_means) m *= discount;
    return e;
}

}  // namespace preint
