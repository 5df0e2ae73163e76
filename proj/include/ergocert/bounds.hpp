#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ergocert/kernel.hpp"
#include "ergocert/spectral.hpp"

namespace ergocert {

struct CoreConstants {
    double delta = 0.0;
    double L = 0.0;
    double A = 0.0;          ///< 1 + L/(1-delta)
    double K_const = 0.0;    ///< max(2(delta+L), 1)
    double hat_alpha = 0.0;  ///< max(r_ess bound, delta)
    double B = 0.0;          ///< L/(1-hat_alpha)
};

/// Constants of the perturbation argument at a rate r and window vartheta.
struct KLConstants {
    double r = 0.0;
    double vartheta = 0.0;
    double H = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double eps1 = 0.0;
    std::optional<double> eps2;
    std::optional<double> eps0;
    std::optional<double> eta;
};

CoreConstants core_constants(const DriftCertificate& drift, double r_ess_bound);

/// (delta nu(1) + tau)/(nu(1) + tau) with tau = max(0, L - nu(V)).
double ress_bound_drift_minorization(double delta, double L, double nu_mass, double nu_V);

/// N-th root of the drift/minorization ratio evaluated on the N-step parameters.
double ress_bound_iterate(double deltaN, double LN, double nuN_mass, double nuN_V, std::size_t N);

/**
 * n1 = floor(ln 2 / ln(r/hat_alpha)) + 1,
 * n2 = floor(ln(8B(B+3) r^{-n1} H) / ln(r/hat_alpha)) + 1,
 * eps1 = r^{n1+n2} / (8B(HB + 1/(1-r))).
 * With `with_eps0`: eta = 1 - ln r / ln hat_alpha,
 * eps2 = (r^{n1} / (4B(H(2B+3) + 2(1+B) + 1/(1-r))))^{1/eta}, eps0 = min(eps1, eps2).
 */
KLConstants kl_constants(const CoreConstants& core, double r, double vartheta, double H,
                         bool with_eps0 = false);

/// min(piV/vartheta + C/(r-rho), (piV + C)/vartheta)
double window_H_bound(double rho, double C, double piV_bound, double r, double vartheta);

/// 4(B+1)/(r^{n1}(1-r)) + 1/(2 eps1)
double rate_constant(const CoreConstants& core, double r_k, std::size_t n1, double eps1_k);

/// L/(1-delta) (1 + 2KC/rho + AK ln V(k)/ln(1/rho)) / V(k)
double tv_bound_direct(std::size_t k, double C_k, double rho_k, const CoreConstants& core,
                       const WeightSequence& V);
double tv_bound_direct(std::size_t k, const TruncationAnalysis& analysis,
                       const CoreConstants& core, const WeightSequence& V);

/// LK/(1-delta) (2c + A ln V(n)/ln(1/r)) / V(n); throws BelowNK for n < n_K.
double tv_bound_from_rate(std::size_t n, double c_k, double r_k, const CoreConstants& core,
                          const WeightSequence& V);

enum class Direction { forward, backward };

/// Truncation error Delta together with the bound used for |ln Delta|.
struct DeltaEstimate {
    double value = 1.0;
    double abs_log = 0.0;

    static DeltaEstimate exact(double delta);
    /// (K/V(k), ln V(k)) as used by the discrete direct bound.
    static DeltaEstimate discrete(std::size_t k, const CoreConstants& core, const WeightSequence& V);
};

/// first_term + L/(1-delta) (2 Cconst/rate + A |ln Delta| / ln(1/rate)) Delta.
/// The two directions share the formula and differ only in which (rate, C) pair is passed.
double tv_bound_general(Direction direction, const DeltaEstimate& Delta, double rate,
                        double Cconst, const CoreConstants& core, double first_term);
double tv_bound_general(Direction direction, double Delta, double rate, double Cconst,
                        const CoreConstants& core, double first_term);

/// c r^{n+1}
double pn_bound(std::size_t n, double c_k, double r_k);

/// min{n : V(n) >= K}, n >= 1.
std::size_t n_K(const CoreConstants& core, const WeightSequence& V);

/// Smallest n >= n_K with tv_bound_from_rate(n) <= eps.
std::size_t n_for_epsilon(double eps, double c_k, double r_k, const CoreConstants& core,
                          const WeightSequence& V, std::size_t cap = 1000000);

/// min{n : V(n) >= K/eps1}; logarithmic closed form for geometric V.
std::size_t k1_threshold(double eps1_k, const CoreConstants& core, const WeightSequence& V);

struct ProvenanceEntry {
    std::string name;
    double value = 0.0;
    std::string formula;
};

/// Certified output at the accepted truncation level.
class BoundReport {
public:
    BoundReport(std::size_t k, const CoreConstants& core, const TruncationAnalysis& analysis,
                const KLConstants& kl, const WeightSequence& V);

    std::size_t k() const noexcept { return k_; }
    double r_k() const noexcept { return kl_.r; }
    double c_k() const noexcept { return c_k_; }
    double tv_direct() const noexcept { return tv_direct_; }
    std::size_t n_K() const noexcept { return n_K_; }
    std::size_t k1() const noexcept { return k1_; }
    const CoreConstants& core() const noexcept { return core_; }
    const TruncationAnalysis& analysis() const noexcept { return analysis_; }
    const KLConstants& kl() const noexcept { return kl_; }
    const WeightSequence& weight() const noexcept { return V_; }

    double tv_from_rate(std::size_t n) const;
    double pn_bound(std::size_t n) const;
    const std::vector<ProvenanceEntry>& provenance() const noexcept { return provenance_; }

    /// Test hook: multiply every certified bound by `factor`.
    void scale_bounds_for_testing(double factor);

private:
    std::size_t k_;
    CoreConstants core_;
    TruncationAnalysis analysis_;
    KLConstants kl_;
    WeightSequence V_;
    double c_k_;
    double tv_direct_;
    std::size_t n_K_;
    std::size_t k1_;
    double scale_ = 1.0;
    std::vector<ProvenanceEntry> provenance_;
};

}  // namespace ergocert
