#pragma once

#include <cstddef>
#include <vector>

#include "ergocert/kernel.hpp"
#include "ergocert/truncation.hpp"

namespace ergocert {

/**
 * Stationary law of P_k by Grassmann-Taksar-Heyman state reduction on the
 * unique closed class. The elimination is subtraction free, so small
 * probabilities keep full relative accuracy.
 *
 * Throws NotErgodic for several closed classes or a periodic closed class.
 */
std::vector<double> stationary(const FiniteTruncation& P, const Tolerances& tol = {});

/// Same reduction in extended precision; used by the verification oracle.
std::vector<long double> stationary_extended(const FiniteTruncation& P);

/// Largest |lambda| over the spectrum of P_k with the Perron eigenvalue removed.
double second_eigenvalue_modulus(const Eigen::MatrixXd& P, const Tolerances& tol = {});
double second_eigenvalue_modulus(const FiniteTruncation& P, const Tolerances& tol = {});

struct ErgodicityConstants {
    std::size_t s = 0;           ///< smallest n >= 1 with ||G^n||_1 <= rho^n
    double C = 0.0;              ///< max_{0<=r<s} ||G^r||_1 / rho^{s-1}
    double C_bar = 0.0;          ///< (1 - delta + 2L) / ((1 - delta) rho^{s-1})
    std::vector<double> norms;   ///< ||G^n||_1 for n = 0..s
};

/**
 * Powers of G = P_k - 1 pi_k in the weighted norm. P_k^n is accumulated by
 * nonnegative products and pi_k subtracted afterwards; G^0 is the identity.
 * Throws SCapExceeded when no n <= s_cap satisfies the contraction test.
 */
ErgodicityConstants ergodicity_constants(const FiniteTruncation& P, const std::vector<double>& pi,
                                         double rho_k, const WeightSequence& V,
                                         const DriftCertificate& drift,
                                         std::size_t s_cap = 10000);

/// ||P_k^n - 1 pi||_1 for n = 0..n_max (n = 0 uses the identity convention only
/// when `identity_at_zero` is set; otherwise ||I - 1 pi||_1).
std::vector<double> weighted_power_norms(const FiniteTruncation& P, const std::vector<double>& pi,
                                         const WeightSequence& V, std::size_t n_max,
                                         bool identity_at_zero = false);
std::vector<double> weighted_power_norms(const FiniteTruncation& P,
                                         const std::vector<long double>& pi,
                                         const WeightSequence& V, std::size_t n_max);

/// max((L + C(1-delta)) / (vartheta (1-delta)), 1/vartheta)
double h_k_bound(double C, double delta, double L, double vartheta);

/// Per-level spectral data assembled by the certification loop.
struct TruncationAnalysis {
    std::size_t k = 0;
    std::vector<double> pi_k;
    double rho_tilde = 0.0;
    double rho_k = 0.0;
    std::size_t s = 0;
    double C_k = 0.0;
    double C_bar_k = 0.0;
    double H_bar_k = 0.0;
    double vartheta = 0.0;
};

}  // namespace ergocert
