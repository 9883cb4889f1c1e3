#include "preint/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "preint/errors.hpp"
#include "preint/preintegrate.hpp"
#include "preint/roots.hpp"

namespace preint {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) {
        xs.push_back(n == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(n - 1));
    }
    return xs;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_power_of_two(std::uint64_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::string optional_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

// Fits the exponent of g at x0 and copies it into the row.
void fit_into(SingularityRow& row, const std::function<double(double)>& g, double x0,
              std::span<const double> h_grid) {
    const auto report = estimate_exponent(g, x0, Side::Both, h_grid);
    row.exponent = report.exponent;
    row.amplitude = report.amplitude;
    row.residual = report.residual;
}

void predict_into(SingularityRow& row, const Integrand& phi, std::size_t axis) {
    if (!row.conds.isolated_sqrt()) return;
    try {
        row.predicted_amplitude = zeta_second_derivative(phi, row.point, axis).amplitude;
    } catch (const OrthogonalGradientError&) {
        row.note = "gradient orthogonal to the probe line";
    }
}

}  // namespace

std::vector<double> option_h_grid() {
    std::vector<double> h;
    for (int k = 16; k <= 36; ++k) h.push_back(std::ldexp(1.0, -k));
    return h;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<ProfileRow> example_profile(AnalyticExample id, std::size_t axis, double t,
                                        double lo, double hi, int samples, Flavor flavor) {
    if (axis > 1) throw DomainError("example axis must be 0 or 1");
    if (samples < 1) throw DomainError("samples must be positive");
    const IndicatorSpec spec{example_integrand(id), t, flavor};
    const bool oracle = flavor == Flavor::Jump
                            ? has_oracle(id, axis)
                            : (id == AnalyticExample::Parabola && axis == 0 && t == 0.0);
    std::vector<ProfileRow> rows;
    for (double c : linspace(lo, hi, samples)) {
        const double rest[1] = {c};
        ProfileRow row{c, preintegrate(spec, axis, rest), std::nullopt};
        if (oracle) {
            row.oracle = flavor == Flavor::Jump ? oracle_preintegral(id, axis, t, c)
                                                : oracle_kink_preintegral(c);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows) {
    out << "coord,value,oracle\n";
    for (const auto& r : rows) {
        out << format_double(r.coord) << ',' << format_double(r.value) << ','
            << optional_field(r.oracle) << '\n';
    }
}

std::vector<SingularityRow> example_singularities(AnalyticExample id, std::size_t axis,
                                                  const std::vector<double>& t_grid,
                                                  Flavor flavor) {
    if (axis > 1) throw DomainError("example axis must be 0 or 1");
    const auto phi = example_integrand(id);
    const std::size_t other = 1 - axis;

    std::vector<std::vector<double>> starts;
    for (double s : linspace(-3.0, 3.0, 25)) starts.push_back(embed(axis, 0.0, std::vector{s}));

    std::vector<SingularityRow> rows;
    for (double t : t_grid) {
        const IndicatorSpec spec{phi, t, flavor};
        const auto g = [&](double s) {
            const double rest[1] = {s};
            return preintegrate(spec, axis, rest);
        };
        const auto points = search_level_points(*phi, starts, axis, t);
        if (points.empty()) {
            SingularityRow row;
            row.t = t;
            row.note = "no level point";
            rows.push_back(row);
            continue;
        }
        for (const auto& p : points) {
            SingularityRow row;
            row.t = t;
            row.found = true;
            row.point = p;
            row.location = p[other];
            row.conds = check_sqrt_conditions(*phi, p, axis).conds;
            try {
                fit_into(row, g, row.location, default_h_grid());
            } catch (const Error& e) {
                row.note = e.what();
            }
            if (flavor == Flavor::Jump) predict_into(row, *phi, axis);
            rows.push_back(row);
        }
    }
    return rows;
}

SingularityRow option_singularity(const MarketParams& params, FactorizationKind kind,
                                  std::size_t axis, double turning) {
    if (axis > 1) throw DomainError("option singularity probe is two-dimensional: axis 0 or 1");
    MarketParams p = params;
    p.d = 2;
    auto phi = std::make_shared<const AsianIntegrand>(p, build_factorization(p, kind));

    // psi(c) = dphi/dy_axis at y_axis = turning, y_other = c.
    const auto psi = [&](double c) {
        return phi->d1(axis, embed(axis, turning, std::vector{c}));
    };
    const auto dpsi = [&](double c) {
        constexpr double h = 1e-6;
        return (psi(c + h) - psi(c - h)) / (2.0 * h);
    };
    SingularityRow row;
    double lo = -1.0;
    double hi = 1.0;
    for (int k = 0; k < 10 && psi(lo) * psi(hi) > 0.0; ++k) {
        lo *= 2.0;
        hi *= 2.0;
    }
    if (psi(lo) * psi(hi) > 0.0) {
        row.note = "no turning point at the requested position";
        return row;
    }
    const double coord = safeguarded_newton(psi, dpsi, lo, hi, RootOptions{1e-12, 100});

    row.found = true;
    row.point = embed(axis, turning, std::vector{coord});
    row.t = phi->value(row.point);
    row.location = coord;
    row.conds = check_sqrt_conditions(*phi, row.point, axis).conds;

    // phi at the turning point carries rounding; lower K by ulps until the
    // probe line through `coord` is not below it, so the baseline value is
    // exactly 1 and the singular point moves by a rounding-level amount.
    const RootFinderConfig roots;
    {
        const auto l = phi->along(axis, row.point);
        const double minimum = l->value(*find_turning_point(*l, roots));
        while (minimum < row.t) row.t = std::nextafter(row.t, 0.0);
    }
    const double strike = row.t;
    const auto g = [&](double s) {
        const auto l = phi->along(axis, embed(axis, 0.0, std::vector{s}));
        return convex_jump_line(*l, strike, roots);
    };
    fit_into(row, g, coord, option_h_grid());
    predict_into(row, *phi, axis);
    return row;
}

void write_singularity_csv(std::ostream& out, const std::vector<SingularityRow>& rows) {
    out << "t,location,exponent,amplitude,residual,predicted_amplitude,"
           "d1_zero,d2_nonzero,grad_nonzero,grad_dpsi_nonzero,not_parallel,note\n";
    for (const auto& r : rows) {
        out << format_double(r.t) << ',';
        if (r.found) {
            out << format_double(r.location) << ',' << format_double(r.exponent) << ','
                << format_double(r.amplitude) << ',' << format_double(r.residual) << ','
                << optional_field(r.predicted_amplitude) << ',' << r.conds.d1_zero << ','
                << r.conds.d2_nonzero << ',' << r.conds.grad_nonzero << ','
                << r.conds.grad_dpsi_nonzero << ',' << r.conds.not_parallel;
        } else {
            out << ",,,,,,,,,";
        }
        std::string note = r.note;
        std::replace(note.begin(), note.end(), ',', ';');
        out << ',' << note << '\n';
    }
}

MethodSpec parse_method(const std::string& name) {
    const std::string s = lower(name);
    if (s == "mc") return {PricingMethod::MC, 0, "MC"};
    if (s == "qmc" || s == "plainqmc") return {PricingMethod::PlainQMC, 0, "PlainQMC"};
    std::string digits;
    if (s.rfind("preint(", 0) == 0 && s.size() > 8 && s.back() == ')') {
        digits = s.substr(7, s.size() - 8);
    } else if (s.rfind("preint", 0) == 0) {
        digits = s.substr(6);
    }
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) &&
        digits.size() < 6) {
        const std::size_t k = std::stoul(digits);
        if (k >= 1) return {PricingMethod::PreintQMC, k - 1, "Preint(" + digits + ")"};
    }
    throw DomainError("unknown method '" + name + "'");
}

void ConvergeConfig::validate() const {
    params.validate();
    if (methods.empty()) throw DomainError("no methods requested");
    if (n_list.empty()) throw DomainError("empty N list");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (!is_power_of_two(n_list[i]) || n_list[i] < 2) {
            throw DomainError("N list entries must be powers of two >= 2");
        }
        if (i > 0 && n_list[i] <= n_list[i - 1]) {
            throw DomainError("N list must be strictly increasing");
        }
    }
    if (shifts < 2) throw DomainError("at least two shifts are needed");
    for (const auto& m : methods) {
        if (m.method != PricingMethod::PreintQMC) continue;
        if (factorization != FactorizationKind::PCA || m.axis > 1) {
            throw DomainError("preintegration is supported on PCA axes 1 and 2 only");
        }
        if (m.axis >= params.d) throw DomainError("preintegration axis exceeds d");
    }
}

void write_record(std::ostream& out, const ConvergenceRecord& r) {
    out << r.method << ',' << r.n << ',' << r.shifts << ',' << format_double(r.estimate) << ','
        << format_double(r.std_error) << ',' << r.evals << ',' << format_double(r.wall_seconds)
        << '\n';
}

ConvergeResult run_converge(const ConvergeConfig& cfg, const GeneratingVector& gv,
                            std::ostream& out) {
    cfg.validate();
    out << kConvergenceHeader << '\n';
    ConvergeResult result;
    try {
        const auto fact = build_factorization(cfg.params, cfg.factorization);
        for (const auto& m : cfg.methods) {
            std::vector<std::pair<double, double>> points;
            for (std::uint64_t n : cfg.n_list) {
                EstimatorConfig ec;
                ec.n = n;
                ec.shifts = cfg.shifts;
                ec.seed = cfg.seed;
                ec.threads = cfg.threads;
                PricingRequest req;
                req.method = m.method;
                req.axis = m.axis;

                const auto start = std::chrono::steady_clock::now();
                const auto e = price_digital_asian(cfg.params, fact, req, ec, gv);
                const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

                ConvergenceRecord r{m.label, n, cfg.shifts, e.value, e.std_error, e.evals,
                                    wall.count()};
                write_record(out, r);
                out.flush();
                result.records.push_back(r);
                points.emplace_back(static_cast<double>(n), e.std_error);
            }
            if (points.size() >= 3) {
                result.rates.emplace_back(m.label, convergence_rate(points));
            }
        }
        for (const auto& [label, rate] : result.rates) {
            out << "#rate," << label << ',' << format_double(rate) << '\n';
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        out << "#error," << msg << '\n';
        out.flush();
        throw;
    }
    return result;
}

}  // namespace preint
