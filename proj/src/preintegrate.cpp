#include "preint/preintegrate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "preint/errors.hpp"
#include "preint/normal.hpp"
#include "preint/quadrature.hpp"
#include "preint/roots.hpp"

namespace preint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxDoublings = 64;

struct Sample {
    double x;
    double g;         // phi(x) - t
    bool positive;
};

double checked(double v, const char* where) {
    if (std::isnan(v)) throw EvaluationError(std::string(where) + ": integrand returned NaN");
    return v;
}

RootOptions root_options(const RootFinderConfig& cfg) {
    return {cfg.root_tol, cfg.max_iter};
}

double level_root(const LineFunction& line, double t, double lo, double hi,
                  const RootFinderConfig& cfg) {
    return safeguarded_newton([&](double x) { return line.value(x) - t; },
                              [&](double x) { return line.d1(x); }, lo, hi,
                              root_options(cfg));
}

double stationary_point(const LineFunction& line, double lo, double hi,
                        const RootFinderConfig& cfg) {
    return safeguarded_newton([&](double x) { return line.d1(x); },
                              [&](double x) { return line.d2(x); }, lo, hi,
                              root_options(cfg));
}

// Walks from `from` in direction `dir` with steps 1, 2, 4, ... until
// phi - t > 0, then refines the crossing. Returns dir * infinity once the
// walk has passed the scan half-width on that side.
double outward_root(const LineFunction& line, double t, double from, double dir,
                    const RootFinderConfig& cfg) {
    const double limit = cfg.scan_halfwidth;
    double prev = from;
    double step = 1.0;
    for (int k = 0; k < kMaxDoublings; ++k) {
        const double x = from + dir * step;
        const double g = checked(line.value(x), "convex_jump_line") - t;
        if (g > 0.0) return level_root(line, t, prev, x, cfg);
        if (dir * x > limit) return dir * kInf;
        prev = x;
        step *= 2.0;
    }
    throw RootRefinementError("convex_jump_line: bracket expansion failed",
                              std::min(from, prev), std::max(from, prev));
}

}  // namespace

void RootFinderConfig::validate() const {
    if (!(scan_halfwidth > 0.0)) throw DomainError("RootFinderConfig: L must be positive");
    if (scan_points < 16) throw DomainError("RootFinderConfig: scan_points must be >= 16");
    if (!(root_tol > 0.0)) throw DomainError("RootFinderConfig: root_tol must be positive");
    if (max_iter < 1) throw DomainError("RootFinderConfig: max_iter must be positive");
}

IntervalDecomposition decompose_line(const LineFunction& line, double t,
                                     const RootFinderConfig& cfg) {
    cfg.validate();
    const int n = cfg.scan_points;
    const double L = cfg.scan_halfwidth;

    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> gs(xs.size());
    std::vector<double> ds(xs.size());
    for (int i = 0; i < n; ++i) {
        const double x = -L + 2.0 * L * static_cast<double>(i) / static_cast<double>(n - 1);
        xs[i] = x;
        gs[i] = checked(line.value(x), "decompose") - t;
        ds[i] = line.d1(x);
    }

    std::vector<Sample> samples;
    samples.reserve(xs.size() + 8);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        samples.push_back({xs[i], gs[i], gs[i] > 0.0});
        if (i + 1 == xs.size()) break;
        const bool turns = std::isfinite(ds[i]) && std::isfinite(ds[i + 1]) &&
                           ((ds[i] < 0.0 && ds[i + 1] > 0.0) || (ds[i] > 0.0 && ds[i + 1] < 0.0));
        if (turns) {
            const double s = stationary_point(line, xs[i], xs[i + 1], cfg);
            if (s > xs[i] && s < xs[i + 1]) {
                const double g = checked(line.value(s), "decompose") - t;
                samples.push_back({s, g, g > 0.0});
            }
        }
    }

    // Touching the level without crossing it is measure zero: drop isolated
    // near-zero humps and fill isolated near-zero dips.
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (std::abs(samples[k].g) > cfg.root_tol) continue;
        const bool left = k == 0 ? samples[k].positive : samples[k - 1].positive;
        const bool right = k + 1 == samples.size() ? samples[k].positive : samples[k + 1].positive;
        if (left == right) samples[k].positive = left;
    }

    IntervalDecomposition out;
    double start = samples.front().positive ? -kInf : 0.0;
    bool inside = samples.front().positive;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const Sample& lo = samples[k];
        const Sample& hi = samples[k + 1];
        if (lo.positive == hi.positive) continue;
        // The refinement bracket needs a genuine sign change; a point
        // reclassified above is never adjacent to a transition.
        const double root = level_root(line, t, lo.x, hi.x, cfg);
        out.roots.push_back(root);
        if (!inside) {
            start = root;
            inside = true;
        } else {
            if (root > start) out.intervals.push_back({start, root});
            inside = false;
        }
    }
    if (inside) out.intervals.push_back({start, kInf});
    out.saturated = out.intervals.size() == 1 && std::isinf(out.intervals[0].a) &&
                    std::isinf(out.intervals[0].b);
    return out;
}

IntervalDecomposition decompose(const IndicatorSpec& spec, std::size_t axis,
                                std::span<const double> y_minus_j,
                                const RootFinderConfig& cfg) {
    const auto y = embed(axis, 0.0, y_minus_j);
    const auto line = spec.base->along(axis, y);
    return decompose_line(*line, spec.threshold, cfg);
}

double jump_mass(const IntervalDecomposition& decomposition) noexcept {
    if (decomposition.saturated) return 1.0;
    double total = 0.0;
    for (const auto& iv : decomposition.intervals) total += normal::mass(iv.a, iv.b);
    return std::min(1.0, total);
}

double preintegrate_jump(const IndicatorSpec& spec, std::size_t axis,
                         std::span<const double> y_minus_j, const RootFinderConfig& cfg) {
    return jump_mass(decompose(spec, axis, y_minus_j, cfg));
}

std::optional<double> find_turning_point(const LineFunction& line,
                                         const RootFinderConfig& cfg) {
    const double d0 = checked(line.d1(0.0), "find_turning_point");
    if (d0 == 0.0) return 0.0;
    const double dir = d0 > 0.0 ? -1.0 : 1.0;
    double prev = 0.0;
    double step = 1.0;
    for (int k = 0; k < kMaxDoublings; ++k) {
        const double x = dir * step;
        const double dx = checked(line.d1(x), "find_turning_point");
        if ((dx > 0.0) != (d0 > 0.0) && dx != 0.0) {
            return stationary_point(line, prev, x, cfg);
        }
        if (dx == 0.0) {
            // Either a genuine stationary point or phi' underflowed on a
            // flat asymptote; the latter has no curvature either.
            if (line.d2(x) != 0.0) return x;
            return std::nullopt;
        }
        if (std::abs(x) > cfg.scan_halfwidth) return std::nullopt;
        prev = x;
        step *= 2.0;
    }
    return std::nullopt;
}

double convex_jump_line(const LineFunction& line, double t, const RootFinderConfig& cfg) {
    cfg.validate();
    if (const auto turning = find_turning_point(line, cfg)) {
        const double ystar = *turning;
        const double curvature = line.d2(ystar);
        if (!(curvature > 0.0)) {
            throw ConvexityError("convex_jump_line: phi'' = " + std::to_string(curvature) +
                                 " <= 0 at the stationary point " + std::to_string(ystar));
        }
        const double gmin = checked(line.value(ystar), "convex_jump_line") - t;
        if (gmin >= 0.0) return 1.0;
        const double xi_a = outward_root(line, t, ystar, -1.0, cfg);
        const double xi_b = outward_root(line, t, ystar, +1.0, cfg);
        return std::min(1.0, normal::cdf(xi_a) + normal::ccdf(xi_b));
    }

    // phi is monotone over [-L, L]; it decreases towards `down`.
    if (!(line.d2(0.0) > 0.0)) {
        throw ConvexityError("convex_jump_line: phi'' <= 0 on a line without turning point");
    }
    const double down = line.d1(0.0) > 0.0 ? -1.0 : 1.0;
    const double far = down * cfg.scan_halfwidth;
    const double g_far = checked(line.value(far), "convex_jump_line") - t;
    if (g_far >= 0.0) return 1.0;
    const double xi = outward_root(line, t, far, -down, cfg);
    if (std::isinf(xi)) return 0.0;
    return down < 0.0 ? normal::ccdf(xi) : normal::cdf(xi);
}

double preintegrate_convex(const IndicatorSpec& spec, std::size_t axis,
                           std::span<const double> y_minus_j, const RootFinderConfig& cfg) {
    const auto y = embed(axis, 0.0, y_minus_j);
    const auto line = spec.base->along(axis, y);
    return convex_jump_line(*line, spec.threshold, cfg);
}

double preintegrate_kink(const IndicatorSpec& spec, std::size_t axis,
                         std::span<const double> y_minus_j, const RootFinderConfig& cfg) {
    const auto y = embed(axis, 0.0, y_minus_j);
    const auto line = spec.base->along(axis, y);
    const double t = spec.threshold;
    const auto decomposition = decompose_line(*line, t, cfg);

    auto weighted = [&](double x) {
        const double g = line->value(x) - t;
        return g > 0.0 ? g * normal::pdf(x) : 0.0;
    };
    // Walks outward in unit steps until the weighted integrand is negligible
    // relative to its value where the walk started.
    auto cut = [&](double from, double dir) {
        const double scale = std::max(1.0, std::abs(weighted(from)));
        double x = from;
        for (int k = 0; k < 200; ++k) {
            x += dir;
            const double w = weighted(x);
            if (std::isnan(w)) throw EvaluationError("preintegrate_kink: integrand returned NaN");
            if (std::abs(w) < 1e-16 * scale) return x;
        }
        return x;
    };

    constexpr double tol = 1e-10;
    double total = 0.0;
    for (const auto& iv : decomposition.intervals) {
        double a = iv.a;
        double b = iv.b;
        if (std::isinf(a) && std::isinf(b)) {
            total += integrate_adaptive(weighted, cut(0.0, -1.0), 0.0, tol).value;
            total += integrate_adaptive(weighted, 0.0, cut(0.0, 1.0), tol).value;
            continue;
        }
        if (std::isinf(a)) a = cut(b, -1.0);
        if (std::isinf(b)) b = cut(a, 1.0);
        total += integrate_adaptive(weighted, a, b, tol).value;
    }
    return total;
}

double preintegrate(const IndicatorSpec& spec, std::size_t axis,
                    std::span<const double> y_minus_j, const RootFinderConfig& cfg) {
    return spec.flavor == Flavor::Jump ? preintegrate_jump(spec, axis, y_minus_j, cfg)
                                       : preintegrate_kink(spec, axis, y_minus_j, cfg);
}

}  // namespace preint
