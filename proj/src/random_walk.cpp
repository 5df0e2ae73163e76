#include "ergocert/random_walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergocert/error.hpp"

namespace ergocert {

void RandomWalkSpec::validate(const Tolerances& tol) const {
    if (increments.size() != g + d + 1) {
        throw InvalidArgument("expected g + d + 1 increment probabilities");
    }
    double sum = 0.0;
    for (double a : increments) {
        if (!(a >= 0.0)) throw InvalidArgument("increment probabilities must be nonnegative");
        sum += a;
    }
    if (std::abs(sum - 1.0) > tol.row_sum) {
        throw InvalidArgument("increment probabilities sum to " + std::to_string(sum));
    }
    if (!(increments.front() > 0.0) || !(increments.back() > 0.0)) {
        throw InvalidArgument("a_{-g} and a_d must be positive");
    }
    if (boundary.size() != g) {
        throw InvalidArgument("expected exactly g boundary rows");
    }
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        if (boundary[i].size() != c + 1) {
            throw InvalidArgument("boundary row " + std::to_string(i) + " must have c + 1 entries");
        }
        double s = 0.0;
        for (double p : boundary[i]) {
            if (!(p >= 0.0)) throw InvalidArgument("negative boundary probability");
            s += p;
        }
        if (std::abs(s - 1.0) > tol.row_sum) {
            throw InvalidArgument("boundary row " + std::to_string(i) + " does not sum to 1");
        }
    }
    if (!(mean_increment() < 0.0)) {
        throw InvalidArgument("mean increment must be negative");
    }
}

double RandomWalkSpec::mean_increment() const {
    double m = 0.0;
    for (std::size_t idx = 0; idx < increments.size(); ++idx) {
        m += (static_cast<double>(idx) - static_cast<double>(g)) * increments[idx];
    }
    return m;
}

double phi(const RandomWalkSpec& spec, double gamma) {
    return laurent_eval(spec.increments, spec.g, gamma);
}

double phi_prime(const RandomWalkSpec& spec, double gamma) {
    double s = 0.0;
    for (std::size_t idx = 0; idx < spec.increments.size(); ++idx) {
        const int m = static_cast<int>(idx) - static_cast<int>(spec.g);
        if (m != 0) s += m * spec.increments[idx] * std::pow(gamma, m - 1);
    }
    return s;
}

namespace {

double phi_second(const RandomWalkSpec& spec, double gamma) {
    double s = 0.0;
    for (std::size_t idx = 0; idx < spec.increments.size(); ++idx) {
        const int m = static_cast<int>(idx) - static_cast<int>(spec.g);
        if (m != 0 && m != 1) {
            s += m * (m - 1) * spec.increments[idx] * std::pow(gamma, m - 2);
        }
    }
    return s;
}

}  // namespace

GammaSolution solve_gamma_hat(const RandomWalkSpec& spec,
                              std::optional<std::pair<double, double>> bracket) {
    if (spec.increments.size() != spec.g + spec.d + 1) {
        throw InvalidArgument("expected g + d + 1 increment probabilities");
    }
    if (!(phi_prime(spec, 1.0) < 0.0)) {
        throw NoContraction("phi'(1) >= 0: the walk has no negative drift, min phi >= 1");
    }
    double lo = 1.0;
    double hi = 2.0;
    if (bracket) {
        lo = std::max(1.0, bracket->first);
        hi = bracket->second;
    }
    std::size_t expand = 0;
    while (phi_prime(spec, hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++expand > 200) throw NoContraction("phi decreasing on all of (1, inf)");
    }
    GammaSolution sol;
    sol.bracket = {lo, hi};

    // Golden section down to a narrow interval, then Newton on phi'.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = phi(spec, x1);
    double f2 = phi(spec, x2);
    while (b - a > 1e-6 * std::max(1.0, a)) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = phi(spec, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = phi(spec, x2);
        }
        ++sol.iterations;
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 100 && std::abs(phi_prime(spec, x)) >= 1e-10; ++it) {
        const double h = phi_second(spec, x);
        if (!(h > 0.0)) break;
        x -= phi_prime(spec, x) / h;
        ++sol.iterations;
    }
    sol.gamma_hat = x;
    sol.phi_at_gamma_hat = phi(spec, x);
    if (!(x > 1.0) || !(sol.phi_at_gamma_hat < 1.0)) {
        throw NoContraction("min phi over (1, inf) is not below 1");
    }
    return sol;
}

DiscreteKernel make_kernel(const RandomWalkSpec& spec, const Tolerances& tol) {
    spec.validate(tol);
    std::vector<Row> rows;
    for (const auto& dense : spec.boundary) {
        Row r;
        for (std::size_t j = 0; j < dense.size(); ++j) {
            if (dense[j] > 0.0) r.push_back({j, dense[j]});
        }
        rows.push_back(std::move(r));
    }
    return DiscreteKernel::homogeneous(std::move(rows), spec.g, spec.increments, tol);
}

DriftCertificate drift_params(const RandomWalkSpec& spec, const GammaSolution& sol,
                              const Tolerances& tol) {
    const double delta = sol.phi_at_gamma_hat;
    const auto V = WeightSequence::geometric(sol.gamma_hat);
    double L = 0.0;
    for (const auto& dense : spec.boundary) {
        double pv = 0.0;
        for (std::size_t j = 0; j < dense.size(); ++j) pv += dense[j] * V.value(j);
        L = std::max(L, pv - delta);
    }
    L = std::max(L, 1e-12);
    const DiscreteKernel kernel = make_kernel(spec, tol);
    DriftOptions opts;
    opts.tol = tol;
    return verify_drift(kernel, V, delta, L, spec.g, opts);
}

RandomWalkSpec reference_walk() {
    RandomWalkSpec s;
    s.g = 2;
    s.d = 1;
    s.c = 2;
    s.increments = {1.0 / 2.0, 1.0 / 3.0, 0.0, 1.0 / 6.0};
    s.boundary = {{0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}};
    return s;
}

}  // namespace ergocert
