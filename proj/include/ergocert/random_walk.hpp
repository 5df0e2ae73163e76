#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ergocert/kernel.hpp"

namespace ergocert {

/**
 * Random walk on the nonnegative integers with bounded i.i.d. increments
 * a_{-g..d} past the first g states. Rows 0..g-1 are boundary rows supported
 * on {0..c}.
 */
struct RandomWalkSpec {
    std::size_t g = 0;
    std::size_t d = 0;
    std::size_t c = 0;
    std::vector<double> increments;             ///< increments[m + g] = a_m
    std::vector<std::vector<double>> boundary;  ///< g dense rows over 0..c

    /// Throws InvalidArgument when an invariant fails.
    void validate(const Tolerances& tol = {}) const;
    double mean_increment() const;
};

struct GammaSolution {
    double gamma_hat = 0.0;
    double phi_at_gamma_hat = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    std::size_t iterations = 0;
};

/// sum_m a_m gamma^m
double phi(const RandomWalkSpec& spec, double gamma);
/// d/dgamma of phi
double phi_prime(const RandomWalkSpec& spec, double gamma);

/// Minimiser of phi over (1, inf). `bracket` overrides the automatic one.
GammaSolution solve_gamma_hat(const RandomWalkSpec& spec,
                              std::optional<std::pair<double, double>> bracket = std::nullopt);

DiscreteKernel make_kernel(const RandomWalkSpec& spec, const Tolerances& tol = {});

/// delta = phi(gamma_hat), L = max over boundary rows of (PV)(i) - delta,
/// floored at 1e-12, then checked by verify_drift.
DriftCertificate drift_params(const RandomWalkSpec& spec, const GammaSolution& sol,
                              const Tolerances& tol = {});

/// Walk used in the worked example: a = (1/2, 1/3, 0, 1/6) over steps -2..1,
/// P(0,0) = P(0,1) = 1/2, P(1,0) = P(1,2) = 1/2.
RandomWalkSpec reference_walk();

}  // namespace ergocert
