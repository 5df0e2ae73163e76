#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ergocert/bounds.hpp"
#include "ergocert/kernel.hpp"
#include "ergocert/spectral.hpp"
#include "ergocert/truncation.hpp"

namespace ergocert {

struct CertificationParams {
    std::size_t initial_k = 2;
    std::size_t stride = 1;
    std::size_t k_cap = 1000;
    double rho_margin = 0.01;
    std::optional<double> rho_k;     ///< fixed rho_k instead of the margin rule
    std::optional<double> vartheta;  ///< fixed vartheta; grid search when absent
    std::optional<double> r_k;       ///< fixed r_k; grid search when absent
    std::optional<std::size_t> horizon;  ///< n at which the grid search minimises the bound
    std::size_t grid_points = 200;
    std::size_t s_cap = 10000;
    bool with_eps0 = false;
    /// Levels analysed in addition to the search loop (reported, never accepted).
    std::vector<std::size_t> report_levels;
    Tolerances tol{};
};

/// Outcome of one truncation level.
struct LevelRecord {
    std::size_t k = 0;
    bool analyzed = false;  ///< reached the rate step
    bool gate_passed = false;
    std::string reason;
    double delta_bound = 0.0;
    double delta_exact = 0.0;
    TruncationAnalysis analysis;
    KLConstants kl;
    std::size_t k1 = 0;
    double c_k = 0.0;
    double tv_direct = 0.0;
    std::optional<double> tv_from_rate;
};

struct CertificationRun {
    CertificationParams params;
    std::vector<LevelRecord> trace;   ///< search loop, increasing k
    std::vector<LevelRecord> extra;   ///< report_levels not visited by the loop
    std::optional<BoundReport> result;

    /// Accepted report; throws Exhausted when the loop passed k_cap.
    const BoundReport& report() const;
    /// Analysed levels from trace and extra, sorted by k, without duplicates.
    std::vector<LevelRecord> analysed_levels() const;
};

/// Upper window for vartheta: min((1-rho_k)/2, (1-rho)/3, (1-delta)/3), or
/// min((1-rho_k)/2, (1-hat_alpha)/3) when no prior rate for P is known.
double vartheta_window(const CoreConstants& core, double rho_k, std::optional<double> rho_prior);

/// All steps for one truncation level. Failures are recorded in `reason`.
LevelRecord analyse_level(const DiscreteKernel& kernel, const WeightSequence& V,
                          const CoreConstants& core, std::optional<double> rho_prior,
                          const CertificationParams& params, std::size_t k);

/// Increase k from initial_k by stride until k >= k1(k) or k > k_cap.
CertificationRun run_certification(const DiscreteKernel& kernel, const WeightSequence& V,
                                   const CoreConstants& core, std::optional<double> rho_prior,
                                   const CertificationParams& params);

struct OracleReference {
    std::size_t k_ref = 0;
    FiniteTruncation P_ref;
    std::vector<long double> pi_ref;
    std::vector<double> pn_measurements;  ///< ||P_ref^n - 1 pi_ref||_1, n = 0..n_max

    /// sum_{j > from} pi_ref(j)
    long double tail_mass(std::size_t from) const;
};

/// Smallest k with K/V(k) < 1e-12, capped at 5000.
std::size_t default_oracle_level(const CoreConstants& core, const WeightSequence& V);

OracleReference build_oracle(const DiscreteKernel& kernel, const WeightSequence& V,
                             std::size_t k_ref, std::size_t n_max);

/// sum_j |pi_k(j) - pi_ref(j)|, with pi_k extended by zero past k.
double measured_tv(const DiscreteKernel& kernel, const OracleReference& oracle, std::size_t k);

struct Margin {
    std::string what;  ///< "tv_direct", "tv_from_rate" or "pn"
    std::size_t index = 0;
    double bound = 0.0;
    double measured = 0.0;
    double ratio = 0.0;  ///< bound / measured, +inf for a zero measurement
};

struct ValidationSummary {
    std::vector<Margin> margins;
    std::size_t violations = 0;
    double min_ratio = 0.0;

    std::string describe() const;
};

/// Compare every certified bound of the run with the oracle. Throws
/// SoundnessViolation with the summary text when a bound is exceeded.
ValidationSummary validate(const CertificationRun& run, const OracleReference& oracle,
                           const DiscreteKernel& kernel);
ValidationSummary validate(const BoundReport& report, const OracleReference& oracle,
                           const DiscreteKernel& kernel);

/// Worker count from ERGOCERT_THREADS (default: hardware concurrency, at least 1).
std::size_t worker_count();

}  // namespace ergocert
