#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "preint/integrand.hpp"
#include "preint/lattice.hpp"
#include "preint/linalg.hpp"
#include "preint/preintegrate.hpp"

namespace preint {

/// Black-Scholes digital Asian option, averaged over d equally spaced dates.
struct MarketParams {
    double s0 = 100.0;
    double strike = 110.0;
    double maturity = 1.0;
    double rate = 0.1;
    double sigma = 0.1;
    std::size_t d = 16;

    /// Throws DomainError unless S0, K, T, sigma > 0, r finite and d >= 1.
    void validate() const;
};

enum class FactorizationKind { Standard, BrownianBridge, PCA };

std::string_view to_string(FactorizationKind kind) noexcept;

/// "standard", "bb" or "pca".
FactorizationKind parse_factorization(std::string_view name);

/// A with A A^T = Sigma, Sigma_{kl} = min(k, l) T / d. Row k maps the
/// standard normal vector y to the Brownian path at date k.
struct CovarianceFactorization {
    FactorizationKind kind = FactorizationKind::Standard;
    Matrix a;
    std::vector<double> eigenvalues;  ///< PCA only, decreasing
};

Matrix brownian_covariance(std::size_t d, double maturity);

/// Standard: closed-form Cholesky factor. BrownianBridge: midpoint bridge,
/// final date first, then the rounded midpoint of every gap level by level.
/// PCA: Jacobi eigenvectors, sorted by decreasing eigenvalue; each column
/// is signed so its first entry is positive (column 1 is then positive
/// throughout).
CovarianceFactorization build_factorization(const MarketParams& params, FactorizationKind kind);

/// phi(y) = (S0/d) sum_k exp((r - sigma^2/2) k T/d + sigma A_k . y).
/// Overflow gives +infinity.
class AsianIntegrand final : public Integrand {
public:
    AsianIntegrand(MarketParams params, CovarianceFactorization fact);

    std::size_t dim() const override { return params_.d; }
    double value(std::span<const double> y) const override;
    double d1(std::size_t axis, std::span<const double> y) const override;
    double d2(std::size_t axis, std::span<const double> y) const override;

    /// O(d^2) setup, then O(d) per evaluation along the line.
    std::unique_ptr<LineFunction> along(std::size_t axis,
                                        std::span<const double> y) const override;

    const MarketParams& params() const noexcept { return params_; }
    const CovarianceFactorization& factorization() const noexcept { return fact_; }

private:
    std::vector<double> exponents(std::span<const double> y) const;
    double weighted_sum(std::size_t axis, int power, std::span<const double> y) const;

    MarketParams params_;
    CovarianceFactorization fact_;
    std::vector<double> drift_;
};

double phi_asian(const MarketParams& params, const CovarianceFactorization& fact,
                 std::span<const double> y);
double phi_asian_d1(const MarketParams& params, const CovarianceFactorization& fact,
                    std::size_t axis, std::span<const double> y);
double phi_asian_d2(const MarketParams& params, const CovarianceFactorization& fact,
                    std::size_t axis, std::span<const double> y);

enum class Monotonicity { MonotoneIncreasing, NotMonotone };

/// Axis j is monotone increasing iff column j of A is nonnegative with a
/// positive entry.
std::vector<Monotonicity> classify_monotonicity(const CovarianceFactorization& fact);

enum class PricingMethod { MC, PlainQMC, PreintQMC };

struct PricingRequest {
    PricingMethod method = PricingMethod::PlainQMC;
    std::size_t axis = 0;  ///< preintegration axis, zero-based
    RootFinderConfig roots;
};

/// e^{-rT} E[ind(phi - K)]. The discount multiplies value, standard error
/// and shift means. cfg.dim is overwritten with d (MC, PlainQMC) or d - 1
/// (PreintQMC).
Estimate price_digital_asian(const MarketParams& params, const CovarianceFactorization& fact,
                             const PricingRequest& request, EstimatorConfig cfg,
                             const GeneratingVector& gv);

}  // namespace preint
