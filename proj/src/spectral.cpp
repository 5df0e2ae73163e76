#include "ergocert/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "ergocert/error.hpp"

namespace ergocert {

namespace {

// Tarjan's strongly connected components, iterative.
std::vector<std::size_t> scc_ids(const std::vector<std::vector<std::size_t>>& adj,
                                 std::size_t& count) {
    const std::size_t n = adj.size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next = 0;
    count = 0;
    struct Frame {
        std::size_t v;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = next++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < adj[f.v].size()) {
                const std::size_t w = adj[f.v][f.edge++];
                if (index[w] == unset) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
        }
    }
    return comp;
}

// States of the unique closed class, in increasing order.
std::vector<std::size_t> closed_class(const FiniteTruncation& P) {
    const std::size_t n = P.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : P.rows[i]) {
            if (e.p > 0.0) adj[i].push_back(e.col);
        }
    }
    std::size_t count = 0;
    const auto comp = scc_ids(adj, count);
    std::vector<bool> closed(count, true);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : adj[i]) {
            if (comp[j] != comp[i]) closed[comp[i]] = false;
        }
    }
    const auto n_closed = std::count(closed.begin(), closed.end(), true);
    if (n_closed != 1) {
        throw NotErgodic(std::to_string(n_closed) + " closed classes in P_" + std::to_string(P.k));
    }
    const auto cls = static_cast<std::size_t>(
        std::find(closed.begin(), closed.end(), true) - closed.begin());
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] == cls) members.push_back(i);
    }

    // Period = gcd of level differences along edges inside the class.
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> level(n, unset);
    std::vector<std::size_t> queue{members.front()};
    level[members.front()] = 0;
    std::size_t period = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const std::size_t u = queue[q];
        for (std::size_t v : adj[u]) {
            if (comp[v] != cls) continue;
            if (level[v] == unset) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
                period = std::gcd(period, static_cast<std::size_t>(std::llabs(diff)));
            }
        }
    }
    if (period != 1) {
        throw NotErgodic("closed class of P_" + std::to_string(P.k) + " has period " +
                         std::to_string(period));
    }
    return members;
}

template <class T>
std::vector<T> gth(const FiniteTruncation& P) {
    const auto members = closed_class(P);
    const std::size_t m = members.size();
    std::vector<std::size_t> pos(P.size(), m);
    for (std::size_t a = 0; a < m; ++a) pos[members[a]] = a;

    std::vector<T> A(m * m, T(0));
    for (std::size_t a = 0; a < m; ++a) {
        for (const auto& e : P.rows[members[a]]) {
            if (pos[e.col] < m) A[a * m + pos[e.col]] += static_cast<T>(e.p);
        }
    }
    for (std::size_t n = m; n-- > 1;) {
        T s = 0;
        for (std::size_t j = 0; j < n; ++j) s += A[n * m + j];
        for (std::size_t i = 0; i < n; ++i) A[i * m + n] /= s;
        for (std::size_t i = 0; i < n; ++i) {
            const T ain = A[i * m + n];
            if (ain == T(0)) continue;
            for (std::size_t j = 0; j < n; ++j) A[i * m + j] += ain * A[n * m + j];
        }
    }
    std::vector<T> x(m, T(0));
    x[0] = 1;
    T total = 1;
    for (std::size_t j = 1; j < m; ++j) {
        T v = 0;
        for (std::size_t i = 0; i < j; ++i) v += x[i] * A[i * m + j];
        x[j] = v;
        total += v;
    }
    std::vector<T> pi(P.size(), T(0));
    for (std::size_t a = 0; a < m; ++a) pi[members[a]] = x[a] / total;
    return pi;
}

template <class T>
std::vector<double> power_norms(const FiniteTruncation& P, const std::vector<T>& pi,
                                const WeightSequence& V, std::size_t n_max,
                                bool identity_at_zero, const double* stop_rho) {
    const std::size_t n = P.size();
    std::vector<double> logv(n);
    for (std::size_t j = 0; j < n; ++j) logv[j] = V.log_value(j);

    auto norm_of = [&](const std::vector<T>& Q) {
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const T g = Q[i * n + j] - pi[j];
                if (g != T(0)) s += static_cast<double>(g < 0 ? -g : g) * std::exp(logv[j] - logv[i]);
            }
            best = std::max(best, s);
        }
        return best;
    };

    std::vector<T> Q(n * n, T(0));
    for (std::size_t i = 0; i < n; ++i) Q[i * n + i] = 1;
    std::vector<double> out;
    out.push_back(identity_at_zero ? 1.0 : norm_of(Q));
    std::vector<T> next(n * n);
    for (std::size_t step = 1; step <= n_max; ++step) {
        std::fill(next.begin(), next.end(), T(0));
        for (std::size_t i = 0; i < n; ++i) {
            const T* qi = &Q[i * n];
            T* ni = &next[i * n];
            for (std::size_t l = 0; l < n; ++l) {
                const T q = qi[l];
                if (q == T(0)) continue;
                for (const auto& e : P.rows[l]) ni[e.col] += q * static_cast<T>(e.p);
            }
        }
        Q.swap(next);
        out.push_back(norm_of(Q));
        if (stop_rho && out.back() <= std::pow(*stop_rho, static_cast<double>(step))) break;
    }
    return out;
}

}  // namespace

std::vector<double> stationary(const FiniteTruncation& P, const Tolerances& tol) {
    auto pi = gth<double>(P);
    const std::size_t n = P.size();
    std::vector<double> piP(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : P.rows[i]) piP[e.col] += pi[i] * e.p;
    }
    double res = 0.0;
    for (std::size_t j = 0; j < n; ++j) res = std::max(res, std::abs(piP[j] - pi[j]));
    if (res > tol.stationary_residual) {
        throw Error("stationary residual " + std::to_string(res) + " above tolerance");
    }
    return pi;
}

std::vector<long double> stationary_extended(const FiniteTruncation& P) {
    return gth<long double>(P);
}

double second_eigenvalue_modulus(const Eigen::MatrixXd& P, const Tolerances& tol) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(P, false);
    if (es.info() != Eigen::Success) throw PeripheralSpectrum("eigenvalue iteration did not converge");
    const auto ev = es.eigenvalues();
    int near_one = 0;
    double second = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i) - std::complex<double>(1.0, 0.0)) <= tol.unit_eigenvalue) {
            ++near_one;
            continue;
        }
        const double m = std::abs(ev(i));
        if (m >= 1.0 - tol.peripheral) {
            throw PeripheralSpectrum("eigenvalue of modulus " + std::to_string(m) + " on the unit circle");
        }
        second = std::max(second, m);
    }
    if (near_one != 1) {
        throw PeripheralSpectrum("eigenvalue 1 has multiplicity " + std::to_string(near_one));
    }
    return second;
}

double second_eigenvalue_modulus(const FiniteTruncation& P, const Tolerances& tol) {
    return second_eigenvalue_modulus(P.dense(), tol);
}

ErgodicityConstants ergodicity_constants(const FiniteTruncation& P, const std::vector<double>& pi,
                                         double rho_k, const WeightSequence& V,
                                         const DriftCertificate& drift, std::size_t s_cap) {
    if (!(rho_k > 0.0 && rho_k < 1.0)) throw InvalidArgument("rho_k must lie in (0,1)");
    if (s_cap < 1) throw InvalidArgument("s_cap must be at least 1");
    auto norms = power_norms<double>(P, pi, V, s_cap, true, &rho_k);
    const std::size_t s = norms.size() - 1;
    if (s == 0 || norms[s] > std::pow(rho_k, static_cast<double>(s))) {
        throw SCapExceeded("no n <= " + std::to_string(s_cap) + " with ||G^n|| <= rho^n at k = " +
                           std::to_string(P.k));
    }
    ErgodicityConstants out;
    out.s = s;
    const double scale = std::pow(rho_k, static_cast<double>(s - 1));
    out.C = *std::max_element(norms.begin(), norms.begin() + static_cast<std::ptrdiff_t>(s)) / scale;
    out.C_bar = (1.0 - drift.delta + 2.0 * drift.L) / ((1.0 - drift.delta) * scale);
    out.norms = std::move(norms);
    return out;
}

std::vector<double> weighted_power_norms(const FiniteTruncation& P, const std::vector<double>& pi,
                                         const WeightSequence& V, std::size_t n_max,
                                         bool identity_at_zero) {
    return power_norms<double>(P, pi, V, n_max, identity_at_zero, nullptr);
}

std::vector<double> weighted_power_norms(const FiniteTruncation& P,
                                         const std::vector<long double>& pi,
                                         const WeightSequence& V, std::size_t n_max) {
    return power_norms<long double>(P, pi, V, n_max, false, nullptr);
}

double h_k_bound(double C, double delta, double L, double vartheta) {
    if (!(vartheta > 0.0)) throw InvalidArgument("vartheta must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
    return std::max((L + C * (1.0 - delta)) / (vartheta * (1.0 - delta)), 1.0 / vartheta);
}

}  // namespace ergocert
