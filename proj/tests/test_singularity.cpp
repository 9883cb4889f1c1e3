#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "preint/analytic_examples.hpp"
#include "preint/errors.hpp"
#include "preint/normal.hpp"
#include "preint/preintegrate.hpp"
#include "preint/singularity.hpp"

using namespace preint;

namespace {

const double kRho0 = normal::pdf(0.0);

std::function<double(double)> profile(AnalyticExample id, std::size_t axis, double t,
                                      Flavor flavor = Flavor::Jump) {
    IndicatorSpec spec{example_integrand(id), t, flavor};
    return [spec, axis](double s) { return preintegrate(spec, axis, std::vector{s}); };
}

// phi = y2 + 0.5 y3 - y1^2 + 0.3 y1 y3: a three-dimensional function with a
// square-root singularity along axis 0 at the origin.
std::shared_ptr<const Integrand> tilted() {
    return std::make_shared<FunctionIntegrand>(
        3,
        [](std::span<const double> y) {
            return y[1] + 0.5 * y[2] - y[0] * y[0] + 0.3 * y[0] * y[2];
        },
        [](std::size_t j, std::span<const double> y) {
            switch (j) {
                case 0: return -2.0 * y[0] + 0.3 * y[2];
                case 1: return 1.0;
                default: return 0.5 + 0.3 * y[0];
            }
        },
        [](std::size_t j, std::span<const double>) { return j == 0 ? -2.0 : 0.0; });
}

}  // namespace

TEST(Conditions, ParabolaAtOrigin) {
    const auto cp = check_sqrt_conditions(*example_integrand(AnalyticExample::Parabola),
                                          std::vector{0.0, 0.0}, 0);
    EXPECT_TRUE(cp.conds.d1_zero);
    EXPECT_TRUE(cp.conds.d2_nonzero);
    EXPECT_TRUE(cp.conds.grad_nonzero);
    EXPECT_TRUE(cp.conds.isolated_sqrt());
    EXPECT_TRUE(cp.conds.level_family());
    EXPECT_EQ(cp.t_star, 0.0);
    EXPECT_NEAR(cp.grad_dpsi[0], -2.0, 1e-12);
    EXPECT_NEAR(cp.grad_dpsi[1], 0.0, 1e-12);
}

TEST(Conditions, CrossAndCubicFail) {
    const auto cross = check_sqrt_conditions(*example_integrand(AnalyticExample::Cross),
                                             std::vector{0.0, 0.0}, 0);
    EXPECT_FALSE(cross.conds.grad_nonzero);
    EXPECT_FALSE(cross.conds.isolated_sqrt());

    const auto cubic = check_sqrt_conditions(*example_integrand(AnalyticExample::Cubic),
                                             std::vector{0.0, 0.0}, 0);
    EXPECT_TRUE(cubic.conds.d1_zero);
    EXPECT_FALSE(cubic.conds.d2_nonzero);
    EXPECT_FALSE(cubic.conds.grad_dpsi_nonzero);
}

TEST(Conditions, OffCriticalPoint) {
    const auto cp = check_sqrt_conditions(*example_integrand(AnalyticExample::Parabola),
                                          std::vector{0.5, 0.0}, 0);
    EXPECT_FALSE(cp.conds.d1_zero);
    EXPECT_THROW(check_sqrt_conditions(*example_integrand(AnalyticExample::Parabola),
                                       std::vector{0.0}, 0),
                 DomainError);
}

TEST(Prediction, Parabola) {
    const auto p = zeta_second_derivative(*example_integrand(AnalyticExample::Parabola),
                                          std::vector{0.0, 0.0});
    EXPECT_DOUBLE_EQ(p.zeta2, 2.0);
    EXPECT_DOUBLE_EQ(p.c, 1.0);
    EXPECT_NEAR(p.amplitude, 0.79788456080286535588, 1e-15);
    EXPECT_EQ(p.side, Side::Right);
}

TEST(Prediction, Hyperbola) {
    const auto p = zeta_second_derivative(*example_integrand(AnalyticExample::Hyperbola),
                                          std::vector{0.0, 1.0});
    EXPECT_DOUBLE_EQ(p.zeta2, 1.0);
    EXPECT_DOUBLE_EQ(p.c, std::sqrt(2.0));
    EXPECT_NEAR(p.amplitude, 1.1283791670955125739, 1e-15);
}

TEST(Prediction, OrthogonalGradient) {
    EXPECT_THROW(zeta_second_derivative(*example_integrand(AnalyticExample::Cross),
                                        std::vector{0.0, 0.0}),
                 OrthogonalGradientError);
    const auto phi = tilted();
    // Orthogonal to grad_{-0} phi = (1, 0.5).
    const double u[2] = {0.5 / std::sqrt(1.25), -1.0 / std::sqrt(1.25)};
    EXPECT_THROW(predict_sqrt_singularity(*phi, std::vector{0.0, 0.0, 0.0}, 0, u),
                 OrthogonalGradientError);
}

TEST(Prediction, SideFollowsCurvatureSign) {
    // phi = y1^2 - y2 curves to the right, phi = y1^2 + y2 to the left.
    auto make = [](double sign) {
        return std::make_shared<FunctionIntegrand>(
            2, [sign](std::span<const double> y) { return y[0] * y[0] + sign * y[1]; },
            [sign](std::size_t j, std::span<const double> y) {
                return j == 0 ? 2.0 * y[0] : sign;
            },
            [](std::size_t j, std::span<const double>) { return j == 0 ? 2.0 : 0.0; });
    };
    EXPECT_EQ(zeta_second_derivative(*make(-1.0), std::vector{0.0, 0.0}).side, Side::Right);
    EXPECT_EQ(zeta_second_derivative(*make(1.0), std::vector{0.0, 0.0}).side, Side::Left);
}

TEST(LevelPoint, ExamplesFromTheory) {
    const auto parabola = example_integrand(AnalyticExample::Parabola);
    const auto p = find_level_point(*parabola, std::vector{0.0, 0.0}, 0, 0.3);
    EXPECT_NEAR(p[0], 0.0, 1e-10);
    EXPECT_NEAR(p[1], 0.3, 1e-10);

    const auto cross = example_integrand(AnalyticExample::Cross);
    const auto q = find_level_point(*cross, std::vector{0.0, 1.0}, 0, 0.25);
    EXPECT_NEAR(q[0], 0.0, 1e-10);
    EXPECT_NEAR(q[1], 0.5, 1e-10);

    const std::vector<double> ystar{0.0, 0.7};
    const auto same = find_level_point(*parabola, ystar, 0, 0.7);
    EXPECT_NEAR(same[0], 0.0, 1e-8);
    EXPECT_NEAR(same[1], 0.7, 1e-8);
}

TEST(LevelPoint, LeavesTheNeighbourhood) {
    const auto parabola = example_integrand(AnalyticExample::Parabola);
    EXPECT_THROW(find_level_point(*parabola, std::vector{0.0, 0.0}, 0, 5.0),
                 OutOfNeighborhoodError);
    // No level point of the Hyperbola below t = -1.
    EXPECT_THROW(find_level_point(*example_integrand(AnalyticExample::Hyperbola),
                                  std::vector{0.0, 0.0}, 0, -1.5),
                 OutOfNeighborhoodError);
}

TEST(LevelPoint, SearchMergesDuplicates) {
    std::vector<std::vector<double>> starts;
    for (int i = -6; i <= 6; ++i) starts.push_back({0.0, 0.5 * i});
    const auto pts = search_level_points(*example_integrand(AnalyticExample::Hyperbola), starts,
                                         0, 0.0);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_NEAR(std::abs(pts[0][1]), 1.0, 1e-10);
    EXPECT_NEAR(pts[0][1] + pts[1][1], 0.0, 1e-10);
}

TEST(Exponent, ExactPowerLaw) {
    const auto r = estimate_exponent([](double x) { return x > 0 ? std::sqrt(x) : 0.0; }, 0.0,
                                     Side::Right);
    EXPECT_NEAR(r.exponent, 0.5, 1e-6);
    EXPECT_NEAR(r.amplitude, 1.0, 1e-6);
    EXPECT_LT(r.residual, 1e-6);
    EXPECT_EQ(r.fit_points.size(), 13u);
}

TEST(Exponent, FlatFunction) {
    const auto r = estimate_exponent([](double) { return 3.0; }, 1.0, Side::Both);
    EXPECT_TRUE(r.flat());
    EXPECT_TRUE(std::isinf(r.exponent));
}

TEST(Exponent, AnalyticExamples) {
    const auto parabola = estimate_exponent(profile(AnalyticExample::Parabola, 0, 0.0), 0.0,
                                            Side::Right);
    EXPECT_NEAR(parabola.exponent, 0.5, 0.02);
    EXPECT_NEAR(parabola.amplitude / (2.0 * kRho0), 1.0, 0.02);

    const auto cubic = estimate_exponent(profile(AnalyticExample::Cubic, 0, 0.0), 0.0,
                                         Side::Right);
    EXPECT_NEAR(cubic.exponent, 1.0 / 3.0, 0.02);

    const auto cross = estimate_exponent(profile(AnalyticExample::Cross, 0, 0.0), 0.0,
                                         Side::Right);
    EXPECT_NEAR(cross.exponent, 1.0, 0.02);
    EXPECT_NEAR(cross.amplitude / (2.0 * kRho0), 1.0, 0.02);

    const auto kink = estimate_exponent(
        profile(AnalyticExample::Parabola, 0, 0.0, Flavor::Kink), 0.0, Side::Right);
    EXPECT_NEAR(kink.exponent, 1.5, 0.02);
    EXPECT_NEAR(kink.amplitude / (4.0 / 3.0 * kRho0), 1.0, 0.02);
}

TEST(ExponentProperty, ParabolaIsOneSided) {
    const auto g = profile(AnalyticExample::Parabola, 0, 0.0);
    for (double h : default_h_grid()) EXPECT_EQ(g(-h), 0.0);
    EXPECT_TRUE(estimate_exponent(g, 0.0, Side::Left).flat());
}

TEST(ExponentProperty, LevelFamilyTranslatesWithThreshold) {
    const auto phi = example_integrand(AnalyticExample::Parabola);
    for (double t : {-0.5, -0.1, 0.1, 0.5}) {
        const auto y = find_level_point(*phi, std::vector{0.0, 0.0}, 0, t);
        EXPECT_NEAR(y[1], t, 1e-8);
        const auto r = estimate_exponent(profile(AnalyticExample::Parabola, 0, t), y[1],
                                         Side::Right);
        EXPECT_NEAR(r.exponent, 0.5, 0.05);
    }
}

TEST(ExponentProperty, PredictionHoldsAlongAnyLine) {
    const auto phi = tilted();
    const std::vector<double> ystar{0.0, 0.0, 0.0};
    const auto cp = check_sqrt_conditions(*phi, ystar, 0);
    ASSERT_TRUE(cp.conds.isolated_sqrt());

    const double norm = std::sqrt(1.25);
    const double gx = 1.0 / norm;
    const double gy = 0.5 / norm;
    const double angle = std::numbers::pi / 6.0;
    const std::vector<std::vector<double>> directions = {
        {gx, gy},
        {gx * std::cos(angle) - gy * std::sin(angle), gx * std::sin(angle) + gy * std::cos(angle)},
    };
    const IndicatorSpec spec{phi, 0.0, Flavor::Jump};
    for (const auto& u : directions) {
        const auto pred = predict_sqrt_singularity(*phi, ystar, 0, u);
        EXPECT_EQ(pred.side, Side::Right);
        const auto g = [&](double s) {
            return preintegrate(spec, 0, std::vector{s * u[0], s * u[1]});
        };
        const auto r = estimate_exponent(g, 0.0, pred.side);
        EXPECT_NEAR(r.exponent, 0.5, 0.05);
        EXPECT_NEAR(r.amplitude / pred.amplitude, 1.0, 0.05);
    }
}

TEST(Detection, HyperbolaBelowMinusOneHasNoSingularity) {
    std::vector<std::vector<double>> starts;
    for (int i = 0; i <= 24; ++i) starts.push_back({0.0, -3.0 + 0.25 * i});
    const auto phi = example_integrand(AnalyticExample::Hyperbola);
    EXPECT_TRUE(search_level_points(*phi, starts, 0, -1.5).empty());
    EXPECT_TRUE(detect_singularities(profile(AnalyticExample::Hyperbola, 0, -1.5), -3.0, 3.0, 61)
                    .empty());

    // Positive control at t = 0: singular points at y2 = +-1.
    EXPECT_EQ(search_level_points(*phi, starts, 0, 0.0).size(), 2u);
    const auto hits = detect_singularities(profile(AnalyticExample::Hyperbola, 0, 0.0), -3.0, 3.0, 61);
    ASSERT_FALSE(hits.empty());
    for (const auto& h : hits) {
        EXPECT_NEAR(std::abs(h.location), 1.0, 1e-12);
        EXPECT_NEAR(h.exponent, 0.5, 0.05);
    }
}

TEST(Side, Names) {
    EXPECT_EQ(to_string(Side::Right), "right");
    EXPECT_EQ(to_string(Side::Left), "left");
    EXPECT_EQ(to_string(Side::Both), "both");
}
