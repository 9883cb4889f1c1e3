#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "preint/asian_option.hpp"
#include "preint/errors.hpp"
#include "preint/lattice.hpp"
#include "preint/linalg.hpp"
#include "preint/preintegrate.hpp"

using namespace preint;

namespace {

MarketParams market(std::size_t d) {
    MarketParams p;
    p.d = d;
    return p;
}

std::vector<double> random_normal(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z;
    std::vector<double> y(n);
    for (double& v : y) v = z(rng);
    return y;
}

EstimatorConfig config(std::uint64_t n, std::uint64_t seed = 5) {
    EstimatorConfig cfg;
    cfg.n = n;
    cfg.shifts = 16;
    cfg.seed = seed;
    return cfg;
}

double combined(const Estimate& a, const Estimate& b) {
    return std::hypot(a.std_error, b.std_error);
}

}  // namespace

TEST(Market, Validation) {
    EXPECT_NO_THROW(market(16).validate());
    auto p = market(16);
    p.sigma = 0.0;
    EXPECT_THROW(p.validate(), DomainError);
    p = market(0);
    EXPECT_THROW(p.validate(), DomainError);
    p = market(4);
    p.strike = -1.0;
    EXPECT_THROW(p.validate(), DomainError);
    p = market(4);
    p.rate = std::numeric_limits<double>::infinity();
    EXPECT_THROW(p.validate(), DomainError);
}

TEST(Factorization, Names) {
    EXPECT_EQ(parse_factorization("standard"), FactorizationKind::Standard);
    EXPECT_EQ(parse_factorization("bb"), FactorizationKind::BrownianBridge);
    EXPECT_EQ(parse_factorization("pca"), FactorizationKind::PCA);
    EXPECT_EQ(to_string(FactorizationKind::BrownianBridge), "bb");
    EXPECT_THROW(parse_factorization("cholesky"), DomainError);
}

TEST(Factorization, StandardTwoDates) {
    const auto f = build_factorization(market(2), FactorizationKind::Standard);
    const double h = std::sqrt(0.5);
    EXPECT_DOUBLE_EQ(f.a(0, 0), h);
    EXPECT_DOUBLE_EQ(f.a(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(f.a(1, 0), h);
    EXPECT_DOUBLE_EQ(f.a(1, 1), h);
}

TEST(Factorization, ReproducesCovariance) {
    for (auto kind : {FactorizationKind::Standard, FactorizationKind::BrownianBridge,
                      FactorizationKind::PCA}) {
        for (std::size_t d : {1u, 3u, 4u, 7u, 16u, 64u}) {
            auto p = market(d);
            p.maturity = 2.5;
            const auto f = build_factorization(p, kind);
            const auto sigma = brownian_covariance(d, p.maturity);
            EXPECT_LE(frobenius_distance(multiply_transpose(f.a), sigma),
                      1e-10 * frobenius_norm(sigma))
                << to_string(kind) << " d=" << d;
        }
    }
}

TEST(Factorization, SignStructure) {
    const auto bb = build_factorization(market(16), FactorizationKind::BrownianBridge);
    const auto pca = build_factorization(market(16), FactorizationKind::PCA);
    for (std::size_t i = 0; i < 16; ++i) {
        for (std::size_t j = 0; j < 16; ++j) EXPECT_GE(bb.a(i, j), 0.0);
        EXPECT_GT(pca.a(i, 0), 0.0);
    }
    for (std::size_t j = 1; j < 16; ++j) {
        bool pos = false;
        bool neg = false;
        for (std::size_t i = 0; i < 16; ++i) {
            pos = pos || pca.a(i, j) > 0.0;
            neg = neg || pca.a(i, j) < 0.0;
        }
        EXPECT_TRUE(pos && neg) << "column " << j;
        EXPECT_GT(pca.a(0, j), 0.0);
    }
    for (std::size_t j = 1; j < 16; ++j)
        EXPECT_GT(pca.eigenvalues[j - 1], pca.eigenvalues[j]);
}

TEST(Factorization, BridgeFinalDateFirst) {
    const auto bb = build_factorization(market(8), FactorizationKind::BrownianBridge);
    // Column 0 carries the terminal value: W_k = (k/d) W_T plus bridge terms.
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(bb.a(k, 0), (k + 1) / 8.0, 1e-15);
}

TEST(Eigen, ClosedFormAtFourDates) {
    const std::size_t d = 4;
    const auto sigma = brownian_covariance(d, 1.0);
    const auto e = symmetric_eigen(sigma);
    for (std::size_t j = 0; j < d; ++j) {
        const double s = std::sin((2.0 * j + 1.0) * std::numbers::pi / (2.0 * (2.0 * d + 1.0)));
        EXPECT_NEAR(e.values[j], (1.0 / d) / (4.0 * s * s), 1e-14);
        double residual = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double sv = 0.0;
            for (std::size_t k = 0; k < d; ++k) sv += sigma(i, k) * e.vectors(k, j);
            residual += std::pow(sv - e.values[j] * e.vectors(i, j), 2);
        }
        EXPECT_LT(std::sqrt(residual), 1e-13);
    }
}

TEST(Phi, Values) {
    const auto p1 = market(1);
    const auto f1 = build_factorization(p1, FactorizationKind::Standard);
    EXPECT_NEAR(phi_asian(p1, f1, std::vector{0.0}), 109.96588551261029418, 1e-11);

    const auto p4 = market(4);
    const std::vector<double> zero(4, 0.0);
    double sum = 0.0;
    for (int k = 1; k <= 4; ++k) sum += std::exp((0.1 - 0.005) * k / 4.0);
    for (auto kind : {FactorizationKind::Standard, FactorizationKind::BrownianBridge,
                      FactorizationKind::PCA}) {
        EXPECT_NEAR(phi_asian(p4, build_factorization(p4, kind), zero), 25.0 * sum, 1e-12);
    }
}

TEST(Phi, LinearInSpot) {
    std::mt19937_64 rng(1);
    auto p = market(8);
    const auto f = build_factorization(p, FactorizationKind::PCA);
    auto doubled = p;
    doubled.s0 *= 2.0;
    for (int i = 0; i < 20; ++i) {
        const auto y = random_normal(rng, 8);
        EXPECT_NEAR(phi_asian(doubled, f, y), 2.0 * phi_asian(p, f, y), 1e-12 * phi_asian(p, f, y));
    }
}

TEST(Phi, OverflowIsInfinite) {
    const auto p = market(2);
    const auto f = build_factorization(p, FactorizationKind::Standard);
    EXPECT_TRUE(std::isinf(phi_asian(p, f, std::vector{1e6, 1e6})));
}

TEST(PhiProperty, DerivativeSigns) {
    std::mt19937_64 rng(2);
    const auto p = market(16);
    const auto pca = build_factorization(p, FactorizationKind::PCA);
    const auto standard = build_factorization(p, FactorizationKind::Standard);
    for (int i = 0; i < 100; ++i) {
        const auto y = random_normal(rng, 16);
        for (std::size_t j = 0; j < 16; ++j) {
            EXPECT_GT(phi_asian_d2(p, pca, j, y), 0.0);
            EXPECT_GT(phi_asian_d1(p, standard, j, y), 0.0);
        }
    }
}

TEST(PhiProperty, DerivativesMatchFiniteDifferences) {
    std::mt19937_64 rng(3);
    const auto p = market(16);
    const double h = 1e-5;
    for (auto kind : {FactorizationKind::Standard, FactorizationKind::PCA}) {
        const auto f = build_factorization(p, kind);
        const AsianIntegrand phi(p, f);
        for (int i = 0; i < 10; ++i) {
            auto y = random_normal(rng, 16);
            for (std::size_t j : {0u, 1u, 7u, 15u}) {
                auto up = y;
                auto dn = y;
                up[j] += h;
                dn[j] -= h;
                const double f0 = phi_asian(p, f, y);
                const double fu = phi_asian(p, f, up);
                const double fd = phi_asian(p, f, dn);
                const double d1 = phi_asian_d1(p, f, j, y);
                const double d2 = phi_asian_d2(p, f, j, y);
                EXPECT_NEAR((fu - fd) / (2 * h), d1, 1e-6 * std::max(1.0, std::abs(d1)));
                EXPECT_NEAR((fu - 2 * f0 + fd) / (h * h), d2, 1e-3 * std::max(1.0, std::abs(d2)));

                EXPECT_DOUBLE_EQ(phi.value(y), f0);
                const auto line = phi.along(j, y);
                EXPECT_NEAR(line->value(y[j] + 0.3), phi_asian(p, f, [&] {
                                auto z = y;
                                z[j] += 0.3;
                                return z;
                            }()),
                            1e-12 * f0);
                EXPECT_NEAR(line->d1(y[j]), d1, 1e-12 * std::max(1.0, std::abs(d1)));
                EXPECT_NEAR(line->d2(y[j]), d2, 1e-12 * std::max(1.0, std::abs(d2)));
            }
        }
    }
}

TEST(Monotonicity, PerKind) {
    for (std::size_t d : {4u, 16u, 64u}) {
        const auto p = market(d);
        for (auto kind : {FactorizationKind::Standard, FactorizationKind::BrownianBridge}) {
            for (auto m : classify_monotonicity(build_factorization(p, kind)))
                EXPECT_EQ(m, Monotonicity::MonotoneIncreasing);
        }
        const auto pca = classify_monotonicity(build_factorization(p, FactorizationKind::PCA));
        EXPECT_EQ(pca[0], Monotonicity::MonotoneIncreasing);
        for (std::size_t j = 1; j < d; ++j) EXPECT_EQ(pca[j], Monotonicity::NotMonotone);
    }
}

TEST(OptionProperty, SingleTurningPointOnSecondAxis) {
    std::mt19937_64 rng(4);
    const auto p = market(16);
    const AsianIntegrand phi(p, build_factorization(p, FactorizationKind::PCA));
    for (int i = 0; i < 50; ++i) {
        const auto y = random_normal(rng, 16);
        const auto line = phi.along(1, y);
        const auto x = find_turning_point(*line);
        ASSERT_TRUE(x.has_value());
        EXPECT_LE(std::abs(line->d1(*x)), 1e-10 * std::max(1.0, line->value(*x)));
        EXPECT_GT(line->d2(*x), 0.0);
        EXPECT_LT(line->d1(*x - 0.5), 0.0);
        EXPECT_GT(line->d1(*x + 0.5), 0.0);
    }
}

TEST(OptionProperty, PreintegralIsProbability) {
    std::mt19937_64 rng(5);
    const auto p = market(16);
    const auto phi = std::make_shared<AsianIntegrand>(p, build_factorization(p, FactorizationKind::PCA));
    const IndicatorSpec spec{phi, p.strike, Flavor::Jump};
    for (int i = 0; i < 200; ++i) {
        const auto rest = random_normal(rng, 15);
        for (std::size_t axis : {0u, 1u}) {
            const double v = preintegrate_convex(spec, axis, rest);
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Price, TinyStrikePaysAlways) {
    auto p = market(4);
    p.strike = 1e-8;
    const auto f = build_factorization(p, FactorizationKind::PCA);
    const auto gv = embedded_generating_vector();
    for (auto method : {PricingMethod::MC, PricingMethod::PlainQMC, PricingMethod::PreintQMC}) {
        PricingRequest req;
        req.method = method;
        const auto e = price_digital_asian(p, f, req, config(256), gv);
        EXPECT_NEAR(e.value, std::exp(-0.1), 1e-15);
        EXPECT_EQ(e.std_error, 0.0);
    }
}

TEST(Price, MethodsAgreeAtFourDates) {
    const auto p = market(4);
    const auto f = build_factorization(p, FactorizationKind::PCA);
    const auto gv = embedded_generating_vector();
    std::vector<Estimate> est;
    for (auto [method, axis] : {std::pair{PricingMethod::MC, 0}, {PricingMethod::PlainQMC, 0},
                                {PricingMethod::PreintQMC, 0}, {PricingMethod::PreintQMC, 1}}) {
        PricingRequest req;
        req.method = method;
        req.axis = static_cast<std::size_t>(axis);
        est.push_back(price_digital_asian(p, f, req, config(4096), gv));
        EXPECT_GE(est.back().value, 0.0);
        EXPECT_LE(est.back().value, std::exp(-0.1));
    }
    for (std::size_t a = 0; a < est.size(); ++a)
        for (std::size_t b = a + 1; b < est.size(); ++b)
            EXPECT_LE(std::abs(est[a].value - est[b].value), 3.0 * combined(est[a], est[b]))
                << a << " vs " << b;
    EXPECT_EQ(est[2].evals, 4096u * 16u);
}

TEST(Price, PreintegrationReducesError) {
    const auto p = market(16);
    const auto f = build_factorization(p, FactorizationKind::PCA);
    const auto gv = embedded_generating_vector();
    PricingRequest plain;
    PricingRequest pre;
    pre.method = PricingMethod::PreintQMC;
    const auto a = price_digital_asian(p, f, plain, config(4096), gv);
    const auto b = price_digital_asian(p, f, pre, config(4096), gv);
    EXPECT_LT(b.std_error, a.std_error);
    EXPECT_LE(std::abs(a.value - b.value), 3.0 * combined(a, b));
}

TEST(PriceProperty, FactorizationInvariance) {
    const auto p = market(8);
    PricingRequest mc;
    mc.method = PricingMethod::MC;
    std::vector<Estimate> est;
    for (auto kind : {FactorizationKind::Standard, FactorizationKind::BrownianBridge,
                      FactorizationKind::PCA}) {
        est.push_back(
            price_digital_asian(p, build_factorization(p, kind), mc, config(4096), {}));
    }
    for (std::size_t a = 0; a < est.size(); ++a)
        for (std::size_t b = a + 1; b < est.size(); ++b)
            EXPECT_LE(std::abs(est[a].value - est[b].value), 3.0 * combined(est[a], est[b]));
}

TEST(PriceProperty, DiscountScalesShiftMeans) {
    const auto p = market(4);
    const auto f = build_factorization(p, FactorizationKind::PCA);
    PricingRequest req;
    const auto e = price_digital_asian(p, f, req, config(512), embedded_generating_vector());
    for (double m : e.per_shift_means) {
        EXPECT_GE(m, 0.0);
        EXPECT_LE(m, std::exp(-0.1) * (1 + 1e-15));
    }
    const auto agg = aggregate(e.per_shift_means, 512);
    EXPECT_NEAR(agg.value, e.value, 1e-15);
    EXPECT_NEAR(agg.std_error, e.std_error, 1e-15);
}
