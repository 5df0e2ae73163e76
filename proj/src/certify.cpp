#include "ergocert/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "ergocert/error.hpp"

namespace ergocert {

namespace {

template <class F>
void parallel_for(std::size_t n, F&& body) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct Choice {
    double vartheta = 0.0;
    double r = 0.0;
};

// Rate step for fixed (vartheta, r); nullopt when the window rejects it.
std::optional<LevelRecord> rate_step(LevelRecord rec, const CoreConstants& core,
                                     const WeightSequence& V, const CertificationParams& params,
                                     double vartheta, double r) {
    try {
        const double H = h_k_bound(rec.analysis.C_k, core.delta, core.L, vartheta);
        rec.kl = kl_constants(core, r, vartheta, H, params.with_eps0);
        rec.analysis.vartheta = vartheta;
        rec.analysis.H_bar_k = H;
        rec.k1 = k1_threshold(rec.kl.eps1, core, V);
        rec.c_k = rate_constant(core, r, rec.kl.n1, rec.kl.eps1);
        if (rec.k >= n_K(core, V)) {
            rec.tv_from_rate = tv_bound_from_rate(rec.k, rec.c_k, r, core, V);
        }
        rec.gate_passed = rec.k >= rec.k1;
        rec.analyzed = true;
        return rec;
    } catch (const InvalidWindow&) {
        return std::nullopt;
    }
}

}  // namespace

std::size_t worker_count() {
    if (const char* env = std::getenv("ERGOCERT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double vartheta_window(const CoreConstants& core, double rho_k, std::optional<double> rho_prior) {
    double w = (1.0 - rho_k) / 2.0;
    if (rho_prior) {
        w = std::min({w, (1.0 - *rho_prior) / 3.0, (1.0 - core.delta) / 3.0});
    } else {
        w = std::min(w, (1.0 - core.hat_alpha) / 3.0);
    }
    return w;
}

LevelRecord analyse_level(const DiscreteKernel& kernel, const WeightSequence& V,
                          const CoreConstants& core, std::optional<double> rho_prior,
                          const CertificationParams& params, std::size_t k) {
    LevelRecord rec;
    rec.k = k;
    rec.analysis.k = k;
    rec.delta_bound = delta_bound(k, core.K_const, V);
    rec.delta_exact = delta_exact(kernel, k, V);
    try {
        const FiniteTruncation P = truncate(kernel, k);

        rec.analysis.rho_tilde = second_eigenvalue_modulus(P, params.tol);
        const double floor_rate = std::max(rec.analysis.rho_tilde, core.hat_alpha);
        rec.analysis.rho_k = params.rho_k ? *params.rho_k : floor_rate + params.rho_margin;
        if (!(rec.analysis.rho_k > rec.analysis.rho_tilde) || !(rec.analysis.rho_k < 1.0)) {
            rec.reason = "rho_k outside (rho_tilde_k, 1)";
            return rec;
        }

        rec.analysis.pi_k = stationary(P, params.tol);

        DriftCertificate drift{core.delta, core.L, 0, true};
        const auto erg = ergodicity_constants(P, rec.analysis.pi_k, rec.analysis.rho_k, V, drift,
                                              params.s_cap);
        rec.analysis.s = erg.s;
        rec.analysis.C_k = erg.C;
        rec.analysis.C_bar_k = erg.C_bar;

        rec.tv_direct = tv_bound_direct(k, rec.analysis, core, V);

        const double window = vartheta_window(core, rec.analysis.rho_k, rho_prior);
        const double lo = std::max(core.hat_alpha, rec.analysis.rho_k);

        if (params.vartheta && params.r_k) {
            const double th = *params.vartheta;
            const double r = *params.r_k;
            if (!(th > 0.0 && th < window) || !(r >= lo + th && r <= 1.0 - th)) {
                rec.reason = "(vartheta, r_k) outside the admissible window";
                return rec;
            }
            auto done = rate_step(rec, core, V, params, th, r);
            if (!done) {
                rec.reason = "(vartheta, r_k) outside the admissible window";
                return rec;
            }
            rec = std::move(*done);
        } else {
            const std::size_t N = std::max<std::size_t>(params.grid_points, 1);
            const std::size_t horizon =
                params.horizon ? *params.horizon : std::max(k, n_K(core, V));
            std::vector<double> thetas;
            if (params.vartheta) {
                thetas.push_back(*params.vartheta);
            } else {
                double top = window;
                if (params.r_k) top = std::min({top, 1.0 - *params.r_k, *params.r_k - lo});
                for (std::size_t i = 1; i <= N; ++i) {
                    thetas.push_back(top * static_cast<double>(i) / static_cast<double>(N + 1));
                }
            }
            std::optional<LevelRecord> best;
            double best_obj = std::numeric_limits<double>::infinity();
            for (double th : thetas) {
                if (!(th > 0.0 && th < window)) continue;
                std::vector<double> rates;
                if (params.r_k) {
                    rates.push_back(*params.r_k);
                } else {
                    const double a = lo + th;
                    const double b = 1.0 - th;
                    for (std::size_t j = 1; j <= N; ++j) {
                        rates.push_back(a + (b - a) * static_cast<double>(j) /
                                                static_cast<double>(N + 1));
                    }
                }
                for (double r : rates) {
                    if (!(r >= lo + th && r <= 1.0 - th)) continue;
                    auto cand = rate_step(rec, core, V, params, th, r);
                    if (!cand) continue;
                    const double obj = tv_bound_from_rate(std::max(horizon, n_K(core, V)),
                                                          cand->c_k, r, core, V);
                    const bool better =
                        !best || (cand->gate_passed && !best->gate_passed) ||
                        (cand->gate_passed == best->gate_passed && obj < best_obj);
                    if (better) {
                        best_obj = obj;
                        best = std::move(cand);
                    }
                }
            }
            if (!best) {
                rec.reason = "no admissible (vartheta, r_k) on the grid";
                return rec;
            }
            rec = std::move(*best);
        }
        rec.reason = rec.gate_passed ? "gate passed: k >= k1" : "rejected: k < k1";
    } catch (const NotErgodic& e) {
        rec.reason = std::string("NotErgodic: ") + e.what();
    } catch (const PeripheralSpectrum& e) {
        rec.reason = std::string("PeripheralSpectrum: ") + e.what();
    } catch (const SCapExceeded& e) {
        rec.reason = std::string("SCapExceeded: ") + e.what();
    }
    return rec;
}

CertificationRun run_certification(const DiscreteKernel& kernel, const WeightSequence& V,
                                   const CoreConstants& core, std::optional<double> rho_prior,
                                   const CertificationParams& params) {
    if (params.initial_k < 1 || params.stride < 1) {
        throw InvalidArgument("initial_k and stride must be at least 1");
    }
    if (rho_prior && !(*rho_prior > core.delta && *rho_prior < 1.0)) {
        throw InvalidArgument("rho_prior must lie in (delta, 1)");
    }
    CertificationRun run;
    run.params = params;
    for (std::size_t k = params.initial_k; k <= params.k_cap; k += params.stride) {
        LevelRecord rec = analyse_level(kernel, V, core, rho_prior, params, k);
        const bool accept = rec.analyzed && rec.gate_passed;
        run.trace.push_back(rec);
        if (accept) {
            run.result.emplace(k, core, rec.analysis, rec.kl, V);
            break;
        }
    }

    std::set<std::size_t> seen;
    for (const auto& r : run.trace) seen.insert(r.k);
    std::vector<std::size_t> todo;
    for (std::size_t k : params.report_levels) {
        if (seen.insert(k).second) todo.push_back(k);
    }
    std::sort(todo.begin(), todo.end());
    run.extra.resize(todo.size());
    parallel_for(todo.size(), [&](std::size_t i) {
        run.extra[i] = analyse_level(kernel, V, core, rho_prior, params, todo[i]);
    });
    return run;
}

const BoundReport& CertificationRun::report() const {
    if (!result) {
        throw Exhausted("k >= k1 never held up to k_cap = " + std::to_string(params.k_cap));
    }
    return *result;
}

std::vector<LevelRecord> CertificationRun::analysed_levels() const {
    std::vector<LevelRecord> out;
    for (const auto* list : {&trace, &extra}) {
        for (const auto& r : *list) {
            if (r.analyzed) out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const LevelRecord& a, const LevelRecord& b) { return a.k < b.k; });
    return out;
}

long double OracleReference::tail_mass(std::size_t from) const {
    long double s = 0;
    for (std::size_t j = from + 1; j < pi_ref.size(); ++j) s += pi_ref[j];
    return s;
}

std::size_t default_oracle_level(const CoreConstants& core, const WeightSequence& V) {
    std::size_t k = 1;
    while (k < 5000 && !(delta_bound(k, core.K_const, V) < 1e-12)) ++k;
    return k;
}

OracleReference build_oracle(const DiscreteKernel& kernel, const WeightSequence& V,
                             std::size_t k_ref, std::size_t n_max) {
    OracleReference o;
    o.k_ref = k_ref;
    o.P_ref = truncate(kernel, k_ref);
    o.pi_ref = stationary_extended(o.P_ref);
    o.pn_measurements = weighted_power_norms(o.P_ref, o.pi_ref, V, n_max);
    return o;
}

double measured_tv(const DiscreteKernel& kernel, const OracleReference& oracle, std::size_t k) {
    if (k > oracle.k_ref) throw InvalidArgument("oracle coarser than the tested level");
    const auto pi_k = stationary_extended(truncate(kernel, k));
    long double s = 0;
    for (std::size_t j = 0; j < oracle.pi_ref.size(); ++j) {
        const long double a = j < pi_k.size() ? pi_k[j] : 0.0L;
        s += std::fabs(a - oracle.pi_ref[j]);
    }
    return static_cast<double>(s);
}

std::string ValidationSummary::describe() const {
    std::ostringstream os;
    os << margins.size() << " checks, " << violations << " violations, min bound/measured ratio ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", min_ratio);
    os << buf;
    for (const auto& m : margins) {
        if (m.ratio >= 1.0) continue;
        std::snprintf(buf, sizeof buf, " bound %.6g < measured %.6g", m.bound, m.measured);
        os << "\n  " << m.what << "[" << m.index << "]" << buf;
    }
    return os.str();
}

namespace {

void add_margin(ValidationSummary& s, std::string what, std::size_t index, double bound,
                double measured) {
    Margin m{std::move(what), index, bound, measured,
             measured > 0.0 ? bound / measured : std::numeric_limits<double>::infinity()};
    if (m.ratio < 1.0) ++s.violations;
    s.min_ratio = s.margins.empty() ? m.ratio : std::min(s.min_ratio, m.ratio);
    s.margins.push_back(std::move(m));
}

void check_pn(ValidationSummary& s, const BoundReport& report, const OracleReference& oracle) {
    for (std::size_t n = 0; n < oracle.pn_measurements.size(); ++n) {
        add_margin(s, "pn", n, report.pn_bound(n), oracle.pn_measurements[n]);
    }
}

void finish(const ValidationSummary& s) {
    if (s.violations > 0) throw SoundnessViolation(s.describe());
}

}  // namespace

ValidationSummary validate(const CertificationRun& run, const OracleReference& oracle,
                           const DiscreteKernel& kernel) {
    ValidationSummary s;
    const auto levels = run.analysed_levels();
    std::vector<double> tv(levels.size());
    parallel_for(levels.size(), [&](std::size_t i) {
        tv[i] = measured_tv(kernel, oracle, levels[i].k);
    });
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& r = levels[i];
        double direct = r.tv_direct;
        double rate = r.tv_from_rate.value_or(0.0);
        if (run.result && run.result->k() == r.k) {
            direct = run.result->tv_direct();
            if (r.tv_from_rate) rate = run.result->tv_from_rate(r.k);
        }
        add_margin(s, "tv_direct", r.k, direct, tv[i]);
        if (r.gate_passed && r.tv_from_rate) add_margin(s, "tv_from_rate", r.k, rate, tv[i]);
    }
    if (run.result) check_pn(s, *run.result, oracle);
    finish(s);
    return s;
}

ValidationSummary validate(const BoundReport& report, const OracleReference& oracle,
                           const DiscreteKernel& kernel) {
    ValidationSummary s;
    const double tv = measured_tv(kernel, oracle, report.k());
    add_margin(s, "tv_direct", report.k(), report.tv_direct(), tv);
    if (report.k() >= report.n_K()) {
        add_margin(s, "tv_from_rate", report.k(), report.tv_from_rate(report.k()), tv);
    }
    check_pn(s, report, oracle);
    finish(s);
    return s;
}

}  // namespace ergocert
