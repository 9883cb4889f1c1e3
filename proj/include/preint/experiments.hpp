#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "preint/analytic_examples.hpp"
#include "preint/asian_option.hpp"
#include "preint/lattice.hpp"
#include "preint/singularity.hpp"

namespace preint {

// ---- example profiles -------------------------------------------------------

struct ProfileRow {
    double coord;
    double value;
    std::optional<double> oracle;
};

/// Samples (P_axis f_t)(coord) at `samples` equispaced points of [lo, hi].
/// The closed form is attached where one exists.
std::vector<ProfileRow> example_profile(AnalyticExample id, std::size_t axis, double t,
                                        double lo, double hi, int samples,
                                        Flavor flavor = Flavor::Jump);

/// Header "coord,value,oracle"; a missing oracle is an empty field.
void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows);

// ---- singularity probes -----------------------------------------------------

struct SingularityRow {
    double t = 0.0;
    bool found = false;           ///< a level point was located
    std::vector<double> point;    ///< the level point y(t)
    double location = 0.0;        ///< its coordinate off the preintegration axis
    SqrtConditions conds;
    double exponent = 0.0;
    double amplitude = 0.0;
    double residual = 0.0;
    std::optional<double> predicted_amplitude;
    std::string note;
};

/// For each t: searches level points of (phi - t, dphi/dy_axis) from starts
/// on the line y_axis = 0, checks the singularity conditions there and fits
/// the exponent of the preintegral along the other coordinate (both sides
/// pooled). A t with no level point yields one row with found = false.
std::vector<SingularityRow> example_singularities(AnalyticExample id, std::size_t axis,
                                                  const std::vector<double>& t_grid,
                                                  Flavor flavor = Flavor::Jump);

/// Two-dimensional option model preintegrated along `axis` (0 or 1). The
/// off-axis coordinate c is located so that the turning point of phi along
/// the axis sits at y_axis = `turning`; K = phi there (reported as t), and
/// the exponent of the preintegral is fitted along the off-axis coordinate
/// at c. Market parameters other than d and K come from `params`.
/// h = 2^-k, k = 16..36. The option's level curve is nearly flat
/// (|zeta''| ~ 1e-2), so the square-root regime only starts below 2^-12.
std::vector<double> option_h_grid();

SingularityRow option_singularity(const MarketParams& params, FactorizationKind kind,
                                  std::size_t axis, double turning = 0.0);

/// Header "t,location,exponent,amplitude,residual,predicted_amplitude,
/// d1_zero,d2_nonzero,grad_nonzero,grad_dpsi_nonzero,not_parallel,note".
void write_singularity_csv(std::ostream& out, const std::vector<SingularityRow>& rows);

// ---- convergence experiment -------------------------------------------------

struct MethodSpec {
    PricingMethod method = PricingMethod::PlainQMC;
    std::size_t axis = 0;  ///< zero-based, PreintQMC only
    std::string label;     ///< "MC", "PlainQMC", "Preint(k)" with k one-based
};

/// Accepts mc, qmc | plainqmc, preint<k> | preint(k), case-insensitive.
MethodSpec parse_method(const std::string& name);

struct ConvergenceRecord {
    std::string method;
    std::uint64_t n = 0;
    std::size_t shifts = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t evals = 0;
    double wall_seconds = 0.0;
};

struct ConvergeConfig {
    MarketParams params;
    FactorizationKind factorization = FactorizationKind::PCA;
    std::vector<MethodSpec> methods;
    std::vector<std::uint64_t> n_list;
    std::size_t shifts = 16;
    std::uint64_t seed = 0;
    std::size_t threads = 0;

    /// N list strictly increasing powers of two, at least one method,
    /// preintegration only on PCA axes 1 and 2. Throws DomainError.
    void validate() const;
};

inline constexpr const char* kConvergenceHeader =
    "method,N,R,estimate,stderr,evals,wall_seconds";

struct ConvergeResult {
    std::vector<ConvergenceRecord> records;
    std::vector<std::pair<std::string, double>> rates;  ///< per method, when >= 3 N values
};

/// Runs every (method, N) cell in canonical order and streams the CSV to
/// `out`: the header, one row per cell, then "#rate,<method>,<rate>" rows.
/// On a failure the rows so far stay written, an "#error,<message>" row is
/// appended and the exception is rethrown.
ConvergeResult run_converge(const ConvergeConfig& cfg, const GeneratingVector& gv,
                            std::ostream& out);

void write_record(std::ostream& out, const ConvergenceRecord& r);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace preint
