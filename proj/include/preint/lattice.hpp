#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace preint {

struct GeneratingVector {
    std::vector<std::uint32_t> z;
    std::uint64_t n_max = std::uint64_t{1} << 20;
    std::string source;
};

/// The vector compiled into the library (256 dimensions, N <= 2^20).
GeneratingVector embedded_generating_vector();

/// Reads whitespace-separated lines, either "index component" with 1-based
/// contiguous indices or a single column of components. Blank lines and
/// lines starting with '#' are skipped.
GeneratingVector load_generating_vector(const std::filesystem::path& path,
                                        std::uint64_t n_max = std::uint64_t{1} << 20);

/// Point i of the rank-1 lattice with N points, shifted by `shift` modulo 1.
/// i * z_k mod N is formed in integer arithmetic before the shift is added.
std::vector<double> lattice_point(std::span<const std::uint32_t> z, std::uint64_t n,
                                  std::uint64_t i, std::span<const double> shift);

/// Uniform double in [0, 1) that depends only on its four keys.
double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) noexcept;

struct EstimatorConfig {
    std::uint64_t n = 1024;  ///< points per shift, a power of two
    std::size_t shifts = 16;
    std::uint64_t seed = 0;
    std::size_t dim = 1;
    std::size_t threads = 1;  ///< 0 means hardware concurrency

    /// Throws DomainError on a bad n, shifts < 2 or dim == 0.
    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;  ///< sample sd of the shift means over sqrt(R)
    std::vector<double> per_shift_means;
    std::uint64_t evals = 0;
};

/// Builds value and standard error from per-shift means.
Estimate aggregate(std::vector<double> per_shift_means, std::uint64_t n);

/// g evaluated at a point of R^dim (the unit-cube point mapped through inv_cdf).
using GaussianFunction = std::function<double(std::span<const double>)>;

/// Randomly shifted lattice rule. Each shift is summed in index order by a
/// single worker, so results do not depend on `threads`. Unit-cube
/// coordinates equal to 0 are moved to 2^-64 before the normal map.
/// Throws PoisonedEvaluationError on a non-finite g value.
Estimate integrate_qmc(const GaussianFunction& g, const EstimatorConfig& cfg,
                       const GeneratingVector& gv);

/// Plain Monte Carlo with R batches of N points from the counter generator.
Estimate integrate_mc(const GaussianFunction& g, const EstimatorConfig& cfg);

/// Least-squares rate p in stderr ~ N^-p from (N, stderr) records.
double convergence_rate(std::span<const std::pair<double, double>> records);

}  // namespace preint
