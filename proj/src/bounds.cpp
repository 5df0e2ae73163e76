#include "ergocert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergocert/error.hpp"

namespace ergocert {

CoreConstants core_constants(const DriftCertificate& drift, double r_ess_bound) {
    if (!(r_ess_bound < 1.0)) throw InvalidArgument("r_ess bound must be below 1");
    if (!(drift.delta > 0.0 && drift.delta < 1.0) || !(drift.L > 0.0)) {
        throw InvalidArgument("drift certificate needs 0 < delta < 1 and L > 0");
    }
    CoreConstants c;
    c.delta = drift.delta;
    c.L = drift.L;
    c.A = 1.0 + drift.L / (1.0 - drift.delta);
    c.K_const = std::max(2.0 * (drift.delta + drift.L), 1.0);
    c.hat_alpha = std::max(r_ess_bound, drift.delta);
    c.B = drift.L / (1.0 - c.hat_alpha);
    return c;
}

double ress_bound_drift_minorization(double delta, double L, double nu_mass, double nu_V) {
    if (!(nu_mass > 0.0) || !(nu_V >= nu_mass) || !(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument("need nu(1) > 0, nu(V) >= nu(1), 0 < delta < 1");
    }
    const double tau = std::max(0.0, L - nu_V);
    return (delta * nu_mass + tau) / (nu_mass + tau);
}

double ress_bound_iterate(double deltaN, double LN, double nuN_mass, double nuN_V, std::size_t N) {
    if (N < 1) throw InvalidArgument("iterate index must be at least 1");
    const double ratio = ress_bound_drift_minorization(deltaN, LN, nuN_mass, nuN_V);
    return std::pow(ratio, 1.0 / static_cast<double>(N));
}

KLConstants kl_constants(const CoreConstants& core, double r, double vartheta, double H,
                         bool with_eps0) {
    if (!(r > core.hat_alpha) || !(r < 1.0)) {
        throw InvalidWindow("rate r must satisfy hat_alpha < r < 1");
    }
    if (!(vartheta > 0.0)) throw InvalidArgument("vartheta must be positive");
    if (!(H >= 1.0 / vartheta * (1.0 - 1e-15))) throw InvalidArgument("H must be at least 1/vartheta");

    const double log_gap = std::log(r / core.hat_alpha);
    const double n1_real = std::floor(std::log(2.0) / log_gap) + 1.0;
    if (!(log_gap > 0.0) || !(n1_real < 1e7)) {
        throw InvalidWindow("r too close to hat_alpha: n1 diverges");
    }
    KLConstants kl;
    kl.r = r;
    kl.vartheta = vartheta;
    kl.H = H;
    kl.n1 = static_cast<std::size_t>(n1_real);
    const double B = core.B;
    const double log_rn1 = static_cast<double>(kl.n1) * std::log(r);
    const double n2_real =
        std::floor((std::log(8.0 * B * (B + 3.0) * H) - log_rn1) / log_gap) + 1.0;
    if (!(n2_real < 1e7)) throw InvalidWindow("n2 diverges");
    // A nonpositive argument would give n2 <= 0; the count is clamped at 0.
    kl.n2 = n2_real > 0.0 ? static_cast<std::size_t>(n2_real) : 0;
    kl.eps1 = std::pow(r, static_cast<double>(kl.n1 + kl.n2)) /
              (8.0 * B * (H * B + 1.0 / (1.0 - r)));
    if (!(kl.eps1 > 0.0)) throw InvalidWindow("eps1 underflows");

    if (with_eps0) {
        const double eta = 1.0 - std::log(r) / std::log(core.hat_alpha);
        const double base = std::pow(r, static_cast<double>(kl.n1)) /
                            (4.0 * B * (H * (2.0 * B + 3.0) + 2.0 * (1.0 + B) + 1.0 / (1.0 - r)));
        kl.eta = eta;
        kl.eps2 = std::pow(base, 1.0 / eta);
        kl.eps0 = std::min(kl.eps1, *kl.eps2);
    }
    return kl;
}

double window_H_bound(double rho, double C, double piV_bound, double r, double vartheta) {
    if (!(vartheta > 0.0) || !(rho + vartheta <= r * (1.0 + 1e-15)) || !(r < 1.0 - vartheta)) {
        throw InvalidWindow("need rho + vartheta <= r < 1 - vartheta");
    }
    return std::min(piV_bound / vartheta + C / (r - rho), (piV_bound + C) / vartheta);
}

double rate_constant(const CoreConstants& core, double r_k, std::size_t n1, double eps1_k) {
    if (!(eps1_k > 0.0) || !(r_k > 0.0 && r_k < 1.0)) {
        throw InvalidArgument("need eps1 > 0 and 0 < r < 1");
    }
    return 4.0 * (core.B + 1.0) / (std::pow(r_k, static_cast<double>(n1)) * (1.0 - r_k)) +
           1.0 / (2.0 * eps1_k);
}

double tv_bound_direct(std::size_t k, double C_k, double rho_k, const CoreConstants& core,
                       const WeightSequence& V) {
    const double logV = V.log_value(k);
    const double K = core.K_const;
    return core.L / (1.0 - core.delta) *
           (1.0 + 2.0 * K * C_k / rho_k + core.A * K * logV / std::log(1.0 / rho_k)) /
           V.value(k);
}

double tv_bound_direct(std::size_t k, const TruncationAnalysis& analysis,
                       const CoreConstants& core, const WeightSequence& V) {
    return tv_bound_direct(k, analysis.C_k, analysis.rho_k, core, V);
}

std::size_t n_K(const CoreConstants& core, const WeightSequence& V) {
    const double target = std::log(core.K_const);
    std::size_t n = 1;
    if (V.kind() == WeightSequence::Kind::geometric) {
        const double x = target / std::log(V.gamma());
        if (x > 1.0) n = static_cast<std::size_t>(std::ceil(x));
        while (n > 1 && V.log_value(n - 1) >= target) --n;
    }
    while (V.log_value(n) < target) ++n;
    return n;
}

double tv_bound_from_rate(std::size_t n, double c_k, double r_k, const CoreConstants& core,
                          const WeightSequence& V) {
    if (n < n_K(core, V)) throw BelowNK("n below n_K");
    return core.L * core.K_const / (1.0 - core.delta) *
           (2.0 * c_k + core.A * V.log_value(n) / std::log(1.0 / r_k)) / V.value(n);
}

DeltaEstimate DeltaEstimate::exact(double delta) {
    return DeltaEstimate{delta, std::abs(std::log(delta))};
}

DeltaEstimate DeltaEstimate::discrete(std::size_t k, const CoreConstants& core,
                                      const WeightSequence& V) {
    return DeltaEstimate{core.K_const / V.value(k), V.log_value(k)};
}

double tv_bound_general(Direction, const DeltaEstimate& Delta, double rate, double Cconst,
                        const CoreConstants& core, double first_term) {
    if (!(Delta.value > 0.0 && Delta.value <= 1.0) || !(rate > 0.0 && rate < 1.0) ||
        !(Cconst > 0.0)) {
        throw InvalidArgument("need 0 < Delta <= 1, 0 < rate < 1, C > 0");
    }
    return first_term + core.L / (1.0 - core.delta) *
                            (2.0 * Cconst / rate + core.A * Delta.abs_log / std::log(1.0 / rate)) *
                            Delta.value;
}

double tv_bound_general(Direction direction, double Delta, double rate, double Cconst,
                        const CoreConstants& core, double first_term) {
    return tv_bound_general(direction, DeltaEstimate::exact(Delta), rate, Cconst, core, first_term);
}

double pn_bound(std::size_t n, double c_k, double r_k) {
    return c_k * std::pow(r_k, static_cast<double>(n) + 1.0);
}

std::size_t n_for_epsilon(double eps, double c_k, double r_k, const CoreConstants& core,
                          const WeightSequence& V, std::size_t cap) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    for (std::size_t n = n_K(core, V); n <= cap; ++n) {
        if (tv_bound_from_rate(n, c_k, r_k, core, V) <= eps) return n;
    }
    throw NotReached("n(eps) exceeds cap " + std::to_string(cap));
}

std::size_t k1_threshold(double eps1_k, const CoreConstants& core, const WeightSequence& V) {
    if (!(eps1_k > 0.0)) throw InvalidArgument("eps1 must be positive");
    const double target = std::log(core.K_const) - std::log(eps1_k);
    if (target <= 0.0) return 0;
    std::size_t n = 0;
    if (V.kind() == WeightSequence::Kind::geometric) {
        n = static_cast<std::size_t>(std::floor(target / std::log(V.gamma()))) + 1;
        // Cross-check against the direct minimum; they differ only when
        // target / ln gamma sits on an integer up to rounding.
        while (n > 0 && V.log_value(n - 1) >= target) --n;
    } else {
        const auto size = *V.table_size();
        while (n < size && V.log_value(n) < target) ++n;
        if (n == size) throw NotReached("k1 beyond the tabulated weight");
    }
    while (V.log_value(n) < target) ++n;
    return n;
}

BoundReport::BoundReport(std::size_t k, const CoreConstants& core,
                         const TruncationAnalysis& analysis, const KLConstants& kl,
                         const WeightSequence& V)
    : k_(k),
      core_(core),
      analysis_(analysis),
      kl_(kl),
      V_(V),
      c_k_(rate_constant(core, kl.r, kl.n1, kl.eps1)),
      tv_direct_(tv_bound_direct(k, analysis, core, V)),
      n_K_(ergocert::n_K(core, V)),
      k1_(k1_threshold(kl.eps1, core, V)) {
    auto add = [this](std::string name, double v, std::string f) {
        provenance_.push_back({std::move(name), v, std::move(f)});
    };
    add("delta", core.delta, "delta = phi(gamma_hat), drift PV <= delta V + L");
    add("L", core.L, "L = max_i (PV)(i) - delta over boundary rows");
    add("A", core.A, "A = 1 + L/(1-delta)");
    add("K", core.K_const, "K = max(2(delta+L), 1)");
    add("hat_alpha", core.hat_alpha, "hat_alpha = max(r_ess bound, delta)");
    add("B", core.B, "B = L/(1-hat_alpha)");
    add("rho_tilde_k", analysis.rho_tilde, "second eigenvalue modulus of P_k");
    add("rho_k", analysis.rho_k, "rho_k in (max(hat_alpha, rho_tilde_k), 1)");
    add("s", static_cast<double>(analysis.s), "s = min{n >= 1 : ||G_k^n||_1 <= rho_k^n}");
    add("C_k", analysis.C_k, "C_k = max_{0<=r<s} ||G_k^r||_1 / rho_k^{s-1}");
    add("C_bar_k", analysis.C_bar_k, "C_bar_k = (1-delta+2L)/((1-delta) rho_k^{s-1})");
    add("vartheta", kl.vartheta, "0 < vartheta < window");
    add("r_k", kl.r, "max(hat_alpha, rho_k) + vartheta <= r_k <= 1 - vartheta");
    add("H_bar_k", kl.H, "H_bar_k = max((L + C_k(1-delta))/(vartheta(1-delta)), 1/vartheta)");
    add("n1", static_cast<double>(kl.n1), "n1 = floor(ln 2/ln(r/hat_alpha)) + 1");
    add("n2", static_cast<double>(kl.n2), "n2 = floor(ln(8B(B+3) r^{-n1} H)/ln(r/hat_alpha)) + 1");
    add("eps1", kl.eps1, "eps1 = r^{n1+n2}/(8B(HB + 1/(1-r)))");
    if (kl.eps0) {
        add("eta", *kl.eta, "eta = 1 - ln r/ln hat_alpha");
        add("eps2", *kl.eps2, "eps2 = (r^{n1}/(4B(H(2B+3) + 2(1+B) + 1/(1-r))))^{1/eta}");
        add("eps0", *kl.eps0, "eps0 = min(eps1, eps2)");
    }
    add("c_k", c_k_, "c_k = 4(B+1)/(r^{n1}(1-r)) + 1/(2 eps1)");
    add("k1", static_cast<double>(k1_), "k1 = min{n : V(n) >= K/eps1}");
    add("n_K", static_cast<double>(n_K_), "n_K = min{n >= 1 : V(n) >= K}");
    add("tv_direct", tv_direct_,
        "L/(1-delta) (1 + 2KC_k/rho_k + AK ln V(k)/ln(1/rho_k)) / V(k)");
    if (k >= n_K_) {
        add("tv_from_rate", tv_from_rate(k), "LK/(1-delta) (2c_k + A ln V(n)/ln(1/r_k)) / V(n)");
    }
}

double BoundReport::tv_from_rate(std::size_t n) const {
    return scale_ * tv_bound_from_rate(n, c_k_, kl_.r, core_, V_);
}

double BoundReport::pn_bound(std::size_t n) const {
    return scale_ * ergocert::pn_bound(n, c_k_, kl_.r);
}

void BoundReport::scale_bounds_for_testing(double factor) {
    scale_ *= factor;
    tv_direct_ *= factor;
}

}  // namespace ergocert
