#include "preint/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "preint/errors.hpp"
#include "preint/normal.hpp"

namespace preint {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

// sin of the angle between a and b, via |a|^2 |b|^2 - (a.b)^2.
double sine_between(std::span<const double> a, std::span<const double> b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    const double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

}  // namespace

std::string_view to_string(Side side) noexcept {
    switch (side) {
        case Side::Right: return "right";
        case Side::Left: return "left";
        case Side::Both: return "both";
    }
    return "?";
}

std::vector<double> gradient_of_axis_derivative(const Integrand& phi,
                                                std::span<const double> y, std::size_t axis,
                                                double h) {
    std::vector<double> g(y.size());
    std::vector<double> p(y.begin(), y.end());
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (k == axis) {
            g[k] = phi.d2(axis, y);
            continue;
        }
        p[k] = y[k] + h;
        const double up = phi.d1(axis, p);
        p[k] = y[k] - h;
        const double down = phi.d1(axis, p);
        p[k] = y[k];
        g[k] = (up - down) / (2.0 * h);
    }
    return g;
}

CriticalPoint check_sqrt_conditions(const Integrand& phi, std::span<const double> y_star,
                                    std::size_t axis, const ConditionTolerances& tol) {
    if (y_star.size() != phi.dim() || axis >= phi.dim()) {
        throw DomainError("check_sqrt_conditions: point or axis out of range");
    }
    CriticalPoint cp;
    cp.y_star.assign(y_star.begin(), y_star.end());
    cp.axis = axis;
    cp.t_star = phi.value(y_star);
    cp.grad = phi.gradient(y_star);
    cp.grad_dpsi = gradient_of_axis_derivative(phi, y_star, axis, tol.fd_step);

    cp.conds.d1_zero = std::abs(phi.d1(axis, y_star)) <= tol.analytic_tol;
    cp.conds.d2_nonzero = std::abs(phi.d2(axis, y_star)) > tol.analytic_tol;
    cp.conds.grad_nonzero = norm(cp.grad) > tol.analytic_tol;
    cp.conds.grad_dpsi_nonzero = norm(cp.grad_dpsi) > tol.fd_tol;
    cp.conds.not_parallel = cp.conds.grad_nonzero && cp.conds.grad_dpsi_nonzero &&
                            sine_between(cp.grad, cp.grad_dpsi) > tol.fd_tol;
    return cp;
}

SqrtPrediction predict_sqrt_singularity(const Integrand& phi, std::span<const double> y_star,
                                        std::size_t axis,
                                        std::span<const double> direction) {
    if (y_star.size() != phi.dim() || direction.size() + 1 != phi.dim()) {
        throw DomainError("predict_sqrt_singularity: dimension mismatch");
    }
    const auto grad_rest = drop_axis(axis, phi.gradient(y_star));
    const double along = dot(grad_rest, direction) / norm(direction);
    if (std::abs(along) <= 1e-8) {
        throw OrthogonalGradientError(
            "predict_sqrt_singularity: probe direction is orthogonal to grad_{-j} phi");
    }
    const double curvature = phi.d2(axis, y_star);
    SqrtPrediction p;
    p.directional_derivative = along;
    p.zeta2 = -curvature / along;
    if (p.zeta2 != 0.0) {
        p.c = std::sqrt(2.0 / std::abs(p.zeta2));
        p.amplitude = 2.0 * p.c * normal::pdf(y_star[axis]);
    }
    p.side = p.zeta2 > 0.0 ? Side::Right : Side::Left;
    return p;
}

SqrtPrediction zeta_second_derivative(const Integrand& phi, std::span<const double> y_star,
                                      std::size_t axis) {
    if (phi.dim() < 2) throw DomainError("zeta_second_derivative: needs d >= 2");
    std::vector<double> u(phi.dim() - 1, 0.0);
    u[0] = 1.0;
    return predict_sqrt_singularity(phi, y_star, axis, u);
}

std::vector<double> find_level_point(const Integrand& phi, std::span<const double> y_star,
                                     std::size_t axis, double t,
                                     const LevelPointOptions& opt) {
    const std::size_t d = phi.dim();
    if (y_star.size() != d || axis >= d) {
        throw DomainError("find_level_point: point or axis out of range");
    }
    std::vector<double> y(y_star.begin(), y_star.end());

    auto residual = [&](std::span<const double> p) {
        return std::pair{phi.value(p) - t, phi.d1(axis, p)};
    };
    auto size = [](const std::pair<double, double>& f) { return std::hypot(f.first, f.second); };
    auto distance = [&](std::span<const double> p) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += (p[k] - y_star[k]) * (p[k] - y_star[k]);
        return std::sqrt(s);
    };

    const auto converged = [&](const std::pair<double, double>& r) {
        return std::abs(r.first) <= opt.value_tol && std::abs(r.second) <= opt.d1_tol;
    };

    // Iterates past the tolerances while the residual still drops, so that
    // slowly converging starts (degenerate Jacobian at the solution) still
    // end at the same point.
    auto f = residual(y);
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if (f.first == 0.0 && f.second == 0.0) return y;

        const auto row0 = phi.gradient(y);
        const auto row1 = gradient_of_axis_derivative(phi, y, axis, opt.fd_step);
        // Minimal-norm step -J^T (J J^T)^{-1} F, lightly regularised.
        double m00 = dot(row0, row0);
        double m11 = dot(row1, row1);
        const double m01 = dot(row0, row1);
        const double reg = 1e-28 * (m00 + m11);
        m00 += reg;
        m11 += reg;
        const double det = m00 * m11 - m01 * m01;
        if (!(det > 0.0) || !std::isfinite(det)) {
            if (converged(f)) return y;
            throw OutOfNeighborhoodError("find_level_point: singular Jacobian");
        }
        const double w0 = (m11 * f.first - m01 * f.second) / det;
        const double w1 = (m00 * f.second - m01 * f.first) / det;
        std::vector<double> step(d);
        for (std::size_t k = 0; k < d; ++k) step[k] = -(row0[k] * w0 + row1[k] * w1);

        const double current = size(f);
        double damping = 1.0;
        std::vector<double> trial(d);
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving) {
            for (std::size_t k = 0; k < d; ++k) trial[k] = y[k] + damping * step[k];
            const auto ft = residual(trial);
            if (size(ft) < current) {
                y = trial;
                f = ft;
                improved = true;
                break;
            }
            damping *= 0.5;
        }
        if (!improved) {
            if (converged(f)) return y;
            throw OutOfNeighborhoodError("find_level_point: no descent from residual " +
                                         std::to_string(current));
        }
        if (distance(y) > opt.radius) {
            throw OutOfNeighborhoodError("find_level_point: iterate left the neighbourhood");
        }
    }
    if (converged(f)) return y;
    throw OutOfNeighborhoodError("find_level_point: no convergence");
}

std::vector<std::vector<double>> search_level_points(
    const Integrand& phi, std::span<const std::vector<double>> starts, std::size_t axis,
    double t, double merge_tol, const LevelPointOptions& opt) {
    std::vector<std::vector<double>> found;
    for (const auto& start : starts) {
        std::vector<double> p;
        try {
            p = find_level_point(phi, start, axis, t, opt);
        } catch (const OutOfNeighborhoodError&) {
            continue;
        }
        const bool known = std::any_of(found.begin(), found.end(), [&](const auto& q) {
            double s = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k) s += (q[k] - p[k]) * (q[k] - p[k]);
            return std::sqrt(s) <= merge_tol;
        });
        if (!known) found.push_back(std::move(p));
    }
    return found;
}

bool SingularityReport::flat() const noexcept {
    return std::isinf(exponent);
}

std::vector<double> default_h_grid() {
    std::vector<double> h;
    for (int k = 4; k <= 20; ++k) h.push_back(std::ldexp(1.0, -k));
    return h;
}

SingularityReport estimate_exponent(const std::function<double(double)>& g, double x0,
                                    Side side) {
    return estimate_exponent(g, x0, side, default_h_grid());
}

SingularityReport estimate_exponent(const std::function<double(double)>& g, double x0,
                                    Side side, std::span<const double> h_grid) {
    SingularityReport report;
    report.location = x0;
    report.side = side;

    std::vector<double> hs(h_grid.begin(), h_grid.end());
    std::sort(hs.begin(), hs.end(), std::greater<>());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    if (hs.size() > 4) {
        hs.erase(hs.begin(), hs.begin() + 2);
        hs.resize(hs.size() - 2);
    }

    const double base = g(x0);
    if (!std::isfinite(base)) throw EvaluationError("estimate_exponent: g(x0) is not finite");

    std::vector<double> signs;
    if (side != Side::Left) signs.push_back(1.0);
    if (side != Side::Right) signs.push_back(-1.0);

    std::vector<double> lx;
    std::vector<double> ly;
    for (double h : hs) {
        for (double sigma : signs) {
            const double delta = g(x0 + sigma * h) - base;
            if (!std::isfinite(delta)) {
                throw EvaluationError("estimate_exponent: g is not finite on the grid");
            }
            if (delta == 0.0) continue;
            report.fit_points.emplace_back(h, delta);
            lx.push_back(std::log(h));
            ly.push_back(std::log(std::abs(delta)));
        }
    }
    // Distinct abscissae are needed for a slope.
    if (lx.size() < 2 || std::adjacent_find(lx.begin(), lx.end(), std::not_equal_to<>()) ==
                             lx.end()) {
        report.exponent = std::numeric_limits<double>::infinity();
        report.amplitude = 0.0;
        return report;
    }

    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    report.exponent = sxy / sxx;
    const double intercept = my - report.exponent * mx;
    report.amplitude = std::exp(intercept);
    for (std::size_t i = 0; i < lx.size(); ++i) {
        report.residual = std::max(report.residual,
                                   std::abs(ly[i] - (intercept + report.exponent * lx[i])));
    }
    return report;
}

std::vector<SingularityReport> detect_singularities(const std::function<double(double)>& g,
                                                    double lo, double hi, int n,
                                                    double alpha_threshold) {
    std::vector<SingularityReport> hits;
    for (int i = 0; i < n; ++i) {
        const double x = n == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(n - 1);
        for (Side side : {Side::Right, Side::Left}) {
            auto r = estimate_exponent(g, x, side);
            if (r.exponent < alpha_threshold) hits.push_back(std::move(r));
        }
    }
    return hits;
}

}  // namespace preint
