// Command-line front end: analytic example profiles, singularity probes,
// the option convergence experiment and single prices, all as CSV.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "preint/errors.hpp"
#include "preint/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MarketFlags {
    preint::MarketParams params;
    std::string factorization = "pca";

    void add(CLI::App* app) {
        app->add_option("--d", params.d, "Number of averaging dates (dimension)");
        app->add_option("--s0", params.s0, "Initial price");
        app->add_option("--strike", params.strike, "Strike K");
        app->add_option("--maturity", params.maturity, "Final time T in years");
        app->add_option("--rate", params.rate, "Risk-free rate r");
        app->add_option("--sigma", params.sigma, "Volatility");
        app->add_option("--factorization", factorization, "Covariance factorization")
            ->check(CLI::IsMember({"standard", "bb", "pca"}));
    }
};

// "1024", "2^10", "2^10..2^14" (every power in between), comma separated.
std::vector<std::uint64_t> parse_n_list(const std::string& text) {
    auto power = [](const std::string& item) -> std::uint64_t {
        if (item.rfind("2^", 0) == 0) {
            const int k = std::stoi(item.substr(2));
            if (k < 1 || k > 32) throw preint::DomainError("exponent out of range in '" + item + "'");
            return std::uint64_t{1} << k;
        }
        std::size_t used = 0;
        const auto v = std::stoull(item, &used);
        if (used != item.size()) throw preint::DomainError("malformed N '" + item + "'");
        return v;
    };
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            const auto dots = item.find("..");
            if (dots == std::string::npos) {
                out.push_back(power(item));
                continue;
            }
            const auto lo = power(item.substr(0, dots));
            const auto hi = power(item.substr(dots + 2));
            for (std::uint64_t n = lo; n <= hi && n != 0; n *= 2) out.push_back(n);
        } catch (const std::logic_error&) {
            throw preint::DomainError("malformed N list entry '" + item + "'");
        }
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw preint::DomainError("malformed number '" + item + "'");
        }
    }
    return out;
}

preint::GeneratingVector load_vector(const std::string& spec) {
    if (spec == "embedded") return preint::embedded_generating_vector();
    if (!std::ifstream(spec)) throw IoError("cannot read generating vector " + spec);
    return preint::load_generating_vector(spec);
}

// Writes to the named file, or stdout for "-".
class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw IoError("cannot open " + path + " for writing");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close() {
        stream().flush();
        if (!stream()) throw IoError("write failed on " + path_);
    }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
};

std::size_t zero_based(int axis, std::size_t limit) {
    if (axis < 1 || static_cast<std::size_t>(axis) > limit) {
        throw preint::DomainError("--axis must be between 1 and " + std::to_string(limit));
    }
    return static_cast<std::size_t>(axis - 1);
}

preint::AnalyticExample example_id(const std::string& name) {
    const auto id = preint::parse_example(name);
    if (!id) throw preint::DomainError("unknown example '" + name + "'");
    return *id;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preintegration experiments"};
    app.require_subcommand(1);

    // example
    auto* ex = app.add_subcommand("example", "Sample the preintegral of an analytic example");
    std::string ex_name = "parabola";
    int ex_axis = 1;
    double ex_t = 0.0;
    std::vector<double> ex_range{-3.0, 3.0};
    int ex_samples = 61;
    bool ex_kink = false;
    std::string ex_out = "-";
    ex->add_option("--example", ex_name, "parabola | hyperbola | cross | cubic");
    ex->add_option("--axis", ex_axis, "Preintegration axis, 1-based");
    ex->add_option("--t", ex_t, "Threshold t");
    ex->add_option("--coord", ex_range, "Coordinate range LO HI")->expected(2);
    ex->add_option("--samples", ex_samples, "Number of coordinates");
    ex->add_flag("--kink", ex_kink, "Use (phi - t)^+ instead of ind(phi - t)");
    ex->add_option("--out", ex_out, "Output CSV, - for stdout");

    // singularity
    auto* sg = app.add_subcommand("singularity", "Locate and fit singularities of a preintegral");
    std::string sg_name = "parabola";
    bool sg_option = false;
    int sg_axis = 0;
    std::string sg_t = "0";
    double sg_turning = 0.0;
    bool sg_kink = false;
    std::string sg_out = "-";
    MarketFlags sg_market;
    sg->add_option("--example", sg_name, "parabola | hyperbola | cross | cubic");
    sg->add_flag("--option", sg_option, "Probe the two-dimensional option model instead");
    sg->add_option("--axis", sg_axis, "Preintegration axis, 1-based (default 1, option 2)");
    sg->add_option("--t", sg_t, "Comma-separated thresholds (examples)");
    sg->add_option("--turning", sg_turning, "Axis coordinate of the turning point (option)");
    sg->add_flag("--kink", sg_kink, "Use (phi - t)^+ (examples)");
    sg->add_option("--out", sg_out, "Output CSV, - for stdout");
    sg_market.add(sg);

    // converge
    auto* cv = app.add_subcommand("converge", "Standard error against N for several methods");
    MarketFlags cv_market;
    std::string cv_methods = "mc,qmc,preint1,preint2";
    std::string cv_nlist = "2^10..2^14";
    std::size_t cv_shifts = 16;
    std::uint64_t cv_seed = 0;
    std::string cv_vector = "embedded";
    std::string cv_out = "-";
    std::size_t cv_threads = 0;
    bool cv_full = false;
    cv_market.add(cv);
    cv->add_option("--methods", cv_methods, "Comma-separated: mc, qmc, preint1, preint2");
    cv->add_option("--n-list", cv_nlist, "Points per shift, e.g. 2^10..2^14 or 1024,2048");
    cv->add_option("--shifts", cv_shifts, "Random shifts R");
    cv->add_option("--seed", cv_seed, "Seed for shifts and MC");
    cv->add_option("--vector", cv_vector, "Generating vector file, or 'embedded'");
    cv->add_option("--threads", cv_threads, "Worker threads, 0 for all cores");
    cv->add_flag("--full-scale", cv_full, "d = 256 and N = 2^10..2^19 (slow)");
    cv->add_option("--out", cv_out, "Output CSV, - for stdout");

    // price
    auto* pr = app.add_subcommand("price", "One price estimate");
    MarketFlags pr_market;
    std::string pr_method = "preint1";
    std::uint64_t pr_n = 1 << 12;
    std::size_t pr_shifts = 16;
    std::uint64_t pr_seed = 0;
    std::string pr_vector = "embedded";
    std::size_t pr_threads = 0;
    std::string pr_out = "-";
    pr_market.add(pr);
    pr->add_option("--method", pr_method, "mc, qmc or preint<k>");
    pr->add_option("--n", pr_n, "Points per shift");
    pr->add_option("--shifts", pr_shifts, "Random shifts R");
    pr->add_option("--seed", pr_seed, "Seed for shifts and MC");
    pr->add_option("--vector", pr_vector, "Generating vector file, or 'embedded'");
    pr->add_option("--threads", pr_threads, "Worker threads, 0 for all cores");
    pr->add_option("--out", pr_out, "Output CSV, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*ex) {
            const auto id = example_id(ex_name);
            const auto rows = preint::example_profile(
                id, zero_based(ex_axis, 2), ex_t, ex_range[0], ex_range[1], ex_samples,
                ex_kink ? preint::Flavor::Kink : preint::Flavor::Jump);
            Output out(ex_out);
            preint::write_profile_csv(out.stream(), rows);
            out.close();
        } else if (*sg) {
            std::vector<preint::SingularityRow> rows;
            if (sg_option) {
                sg_market.params.validate();
                const auto axis = zero_based(sg_axis == 0 ? 2 : sg_axis, 2);
                rows.push_back(preint::option_singularity(
                    sg_market.params, preint::parse_factorization(sg_market.factorization), axis,
                    sg_turning));
            } else {
                const auto id = example_id(sg_name);
                rows = preint::example_singularities(
                    id, zero_based(sg_axis == 0 ? 1 : sg_axis, 2), parse_doubles(sg_t),
                    sg_kink ? preint::Flavor::Kink : preint::Flavor::Jump);
            }
            Output out(sg_out);
            preint::write_singularity_csv(out.stream(), rows);
            out.close();
            for (const auto& r : rows) {
                if (!r.found) {
                    std::cerr << "t = " << r.t << ": " << r.note << '\n';
                    continue;
                }
                std::cerr << "t = " << r.t << ": singular point at " << r.location
                          << ", exponent " << r.exponent << ", amplitude " << r.amplitude;
                if (r.predicted_amplitude) std::cerr << " (predicted " << *r.predicted_amplitude << ")";
                std::cerr << (r.conds.isolated_sqrt() ? "" : ", square-root conditions fail");
                if (!r.note.empty()) std::cerr << ", " << r.note;
                std::cerr << '\n';
            }
        } else if (*cv) {
            preint::ConvergeConfig cfg;
            cfg.params = cv_market.params;
            if (cv_full) {
                cfg.params.d = 256;
                cv_nlist = "2^10..2^19";
            }
            cfg.factorization = preint::parse_factorization(cv_market.factorization);
            std::stringstream ms(cv_methods);
            for (std::string m; std::getline(ms, m, ',');) cfg.methods.push_back(preint::parse_method(m));
            cfg.n_list = parse_n_list(cv_nlist);
            cfg.shifts = cv_shifts;
            cfg.seed = cv_seed;
            cfg.threads = cv_threads;
            cfg.validate();
            const auto gv = load_vector(cv_vector);
            Output out(cv_out);
            preint::run_converge(cfg, gv, out.stream());
            out.close();
        } else if (*pr) {
            const auto method = preint::parse_method(pr_method);
            const auto kind = preint::parse_factorization(pr_market.factorization);
            const auto gv = load_vector(pr_vector);
            preint::EstimatorConfig ec;
            ec.n = pr_n;
            ec.shifts = pr_shifts;
            ec.seed = pr_seed;
            ec.threads = pr_threads;
            preint::PricingRequest req;
            req.method = method.method;
            req.axis = method.axis;
            const auto fact = preint::build_factorization(pr_market.params, kind);
            const auto start = std::chrono::steady_clock::now();
            const auto e = preint::price_digital_asian(pr_market.params, fact, req, ec, gv);
            const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
            Output out(pr_out);
            out.stream() << preint::kConvergenceHeader << '\n';
            preint::write_record(out.stream(), {method.label, ec.n, ec.shifts, e.value,
                                                e.std_error, e.evals, wall.count()});
            out.close();
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const preint::DomainError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const preint::ParseError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const preint::UnsupportedCombinationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const preint::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
