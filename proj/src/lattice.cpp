#include "preint/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "preint/errors.hpp"
#include "preint/normal.hpp"

namespace preint {

namespace {

constexpr std::uint64_t kShiftStream = 0x51f7;
constexpr std::uint64_t kMcStream = 0x4d43;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool is_power_of_two(std::uint64_t n) noexcept {
    return n != 0 && (n & (n - 1)) == 0;
}

double to_gaussian(double u) {
    if (u <= 0.0) u = 0x1p-64;
    return normal::inv_cdf(u);
}

std::size_t worker_count(const EstimatorConfig& cfg) {
    std::size_t w = cfg.threads;
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    return std::min(w, cfg.shifts);
}

// Runs shift_mean(r) for every r, each on one worker, and aggregates.
template <class ShiftMean>
Estimate run_shifts(const EstimatorConfig& cfg, ShiftMean shift_mean) {
    std::vector<double> means(cfg.shifts);
    const std::size_t workers = worker_count(cfg);
    if (workers <= 1) {
        for (std::size_t r = 0; r < cfg.shifts; ++r) means[r] = shift_mean(r);
        return aggregate(std::move(means), cfg.n);
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t r = next++; r < cfg.shifts; r = next++) {
                try {
                    means[r] = shift_mean(r);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = cfg.shifts;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return aggregate(std::move(means), cfg.n);
}

void check_finite(double v, std::size_t r, std::uint64_t i) {
    if (!std::isfinite(v)) {
        throw PoisonedEvaluationError("non-finite integrand value at shift " + std::to_string(r) +
                                          ", point " + std::to_string(i),
                                      r, static_cast<std::size_t>(i));
    }
}

}  // namespace

GeneratingVector load_generating_vector(const std::filesystem::path& path, std::uint64_t n_max) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open generating vector file " + path.string(), 0);

    GeneratingVector gv;
    gv.n_max = n_max;
    gv.source = path.string();
    int columns = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(tok);
        if (tokens.empty() || tokens.front().front() == '#') continue;
        if (tokens.size() > 2) throw ParseError("expected one or two fields", lineno);
        if (columns == 0) columns = static_cast<int>(tokens.size());
        if (static_cast<int>(tokens.size()) != columns) {
            throw ParseError("inconsistent column count", lineno);
        }

        std::vector<std::uint64_t> values;
        for (const auto& tok : tokens) {
            std::size_t used = 0;
            unsigned long long v = 0;
            try {
                v = std::stoull(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || tok.front() == '-') {
                throw ParseError("malformed integer '" + tok + "'", lineno);
            }
            values.push_back(v);
        }
        if (columns == 2 && values[0] != gv.z.size() + 1) {
            throw ParseError("expected index " + std::to_string(gv.z.size() + 1) + ", got " +
                                 std::to_string(values[0]),
                             lineno);
        }
        const std::uint64_t component = values.back();
        if (component == 0 || component > std::numeric_limits<std::uint32_t>::max()) {
            throw ParseError("component out of range", lineno);
        }
        gv.z.push_back(static_cast<std::uint32_t>(component));
    }
    if (gv.z.empty()) throw ParseError("empty generating vector file", lineno);
    return gv;
}

std::vector<double> lattice_point(std::span<const std::uint32_t> z, std::uint64_t n,
                                  std::uint64_t i, std::span<const double> shift) {
    if (shift.size() > z.size()) {
        throw DomainError("lattice_point: dimension " + std::to_string(shift.size()) +
                          " exceeds generating vector length " + std::to_string(z.size()));
    }
    if (n == 0 || i >= n) throw DomainError("lattice_point: index out of range");
    if (n > (std::uint64_t{1} << 32)) throw DomainError("lattice_point: N above 2^32");
    std::vector<double> x(shift.size());
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < shift.size(); ++k) {
        const std::uint64_t m = i * (z[k] % n) % n;
        double v = static_cast<double>(m) * inv_n + shift[k];
        if (v >= 1.0) v -= 1.0;
        x[k] = v;
    }
    return x;
}

double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return static_cast<double>(h >> 11) * 0x1p-53;
}

void EstimatorConfig::validate() const {
    if (n < 2 || !is_power_of_two(n)) {
        throw DomainError("N must be a power of two >= 2, got " + std::to_string(n));
    }
    if (shifts < 2) throw DomainError("at least two shifts are needed for a standard error");
    if (dim == 0) throw DomainError("dimension must be positive");
}

Estimate aggregate(std::vector<double> per_shift_means, std::uint64_t n) {
    const std::size_t r = per_shift_means.size();
    if (r == 0) throw DomainError("aggregate: no shift means");
    Estimate e;
    e.value = std::accumulate(per_shift_means.begin(), per_shift_means.end(), 0.0) /
              static_cast<double>(r);
    if (r > 1) {
        double ss = 0.0;
        for (double m : per_shift_means) ss += (m - e.value) * (m - e.value);
        e.std_error = std::sqrt(ss / static_cast<double>(r - 1)) / std::sqrt(static_cast<double>(r));
    }
    e.evals = n * r;
    e.per_shift_means = std::move(per_shift_means);
    return e;
}

Estimate integrate_qmc(const GaussianFunction& g, const EstimatorConfig& cfg,
                       const GeneratingVector& gv) {
    cfg.validate();
    if (cfg.n > gv.n_max) {
        throw DomainError("N = " + std::to_string(cfg.n) + " exceeds the generating vector's n_max");
    }
    if (cfg.dim > gv.z.size()) {
        throw DomainError("dimension " + std::to_string(cfg.dim) +
                          " exceeds generating vector length " + std::to_string(gv.z.size()));
    }
    return run_shifts(cfg, [&](std::size_t r) {
        std::vector<double> shift(cfg.dim);
        for (std::size_t k = 0; k < cfg.dim; ++k) {
            shift[k] = counter_uniform(cfg.seed, kShiftStream, r, k);
        }
        std::vector<double> y(cfg.dim);
        double sum = 0.0;
        for (std::uint64_t i = 0; i < cfg.n; ++i) {
            const auto u = lattice_point(std::span(gv.z).first(cfg.dim), cfg.n, i, shift);
            for (std::size_t k = 0; k < cfg.dim; ++k) y[k] = to_gaussian(u[k]);
            const double v = g(y);
            check_finite(v, r, i);
            sum += v;
        }
        return sum / static_cast<double>(cfg.n);
    });
}

Estimate integrate_mc(const GaussianFunction& g, const EstimatorConfig& cfg) {
    cfg.validate();
    return run_shifts(cfg, [&](std::size_t r) {
        std::vector<double> y(cfg.dim);
        double sum = 0.0;
        for (std::uint64_t i = 0; i < cfg.n; ++i) {
            const std::uint64_t point = (static_cast<std::uint64_t>(r) << 40) | i;
            for (std::size_t k = 0; k < cfg.dim; ++k) {
                y[k] = to_gaussian(counter_uniform(cfg.seed, kMcStream, point, k));
            }
            const double v = g(y);
            check_finite(v, r, i);
            sum += v;
        }
        return sum / static_cast<double>(cfg.n);
    });
}

double convergence_rate(std::span<const std::pair<double, double>> records) {
    if (records.size() < 3) throw DomainError("convergence_rate: need at least 3 records");
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& [n, se] : records) {
        if (!(n > 0.0) || !(se > 0.0) || !std::isfinite(se)) {
            throw DomainError("convergence_rate: N and stderr must be positive");
        }
        lx.push_back(std::log(n));
        ly.push_back(std::log(se));
    }
    const double k = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("convergence_rate: N values are not distinct");
    return -sxy / sxx;
}

}  // namespace preint
