#include "ergocert/app/report_io.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace ergocert::app {

const char* const kReportColumns =
    "k,rho_tilde,rho_k,s,C_k,vartheta,r_k,k1,eps1,c_k,tv_direct,tv_from_rate";

std::string exact(double v) { return fmt::format("{:.17g}", v); }

void write_report_csv(const CertificationRun& run, std::ostream& out) {
    out << kReportColumns << '\n';
    for (const auto& r : run.analysed_levels()) {
        const auto& a = r.analysis;
        fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{}\n", r.k, exact(a.rho_tilde),
                   exact(a.rho_k), a.s, exact(a.C_k), exact(a.vartheta), exact(r.kl.r), r.k1,
                   exact(r.kl.eps1), exact(r.c_k), exact(r.tv_direct),
                   r.tv_from_rate ? exact(*r.tv_from_rate) : std::string());
    }
}

void write_trace(const CertificationRun& run, std::ostream& out) {
    auto line = [&](const char* phase, const LevelRecord& r) {
        fmt::print(out, "phase={} k={} status={} delta_bound={:.6e} delta_exact={:.6e}", phase,
                   r.k, r.analyzed ? (r.gate_passed ? "gate_passed" : "gate_failed") : "rejected",
                   r.delta_bound, r.delta_exact);
        if (r.analysis.rho_tilde > 0.0) fmt::print(out, " rho_tilde={:.6f}", r.analysis.rho_tilde);
        if (r.analysis.s > 0) {
            fmt::print(out, " rho_k={:.6f} s={} C_k={:.6f} tv_direct={:.6e}", r.analysis.rho_k,
                       r.analysis.s, r.analysis.C_k, r.tv_direct);
        }
        if (r.analyzed) {
            fmt::print(out, " vartheta={:.6g} r_k={:.6g} k1={} c_k={:.6e}", r.analysis.vartheta,
                       r.kl.r, r.k1, r.c_k);
        }
        fmt::print(out, " reason=\"{}\"\n", r.reason);
    };
    for (const auto& r : run.trace) line("search", r);
    for (const auto& r : run.extra) line("report", r);
    if (run.result) {
        fmt::print(out, "result accepted_k={} r_k={} c_k={:.6e}\n", run.result->k(),
                   run.result->r_k(), run.result->c_k());
    } else {
        fmt::print(out, "result exhausted k_cap={}\n", run.params.k_cap);
    }
}

void write_provenance(const BoundReport& report, std::ostream& out) {
    fmt::print(out, "accepted k = {}\n", report.k());
    for (const auto& p : report.provenance()) {
        fmt::print(out, "{:<12} = {:<24} [{}]\n", p.name, exact(p.value), p.formula);
    }
}

void write_drift_summary(const ResolvedModel& m, std::ostream& out) {
    if (m.gamma) {
        fmt::print(out, "{:<10} = {:<24} [argmin over gamma > 1 of phi(gamma) = sum_m a_m gamma^m]\n",
                   "gamma_hat", exact(m.gamma->gamma_hat));
    }
    const auto& c = m.core;
    fmt::print(out, "{:<10} = {:<24} [delta = phi(gamma_hat)]\n", "delta", exact(c.delta));
    fmt::print(out, "{:<10} = {:<24} [L = max_i (PV)(i) - delta over boundary rows]\n", "L", exact(c.L));
    fmt::print(out, "{:<10} = {:<24} [A = 1 + L/(1-delta)]\n", "A", exact(c.A));
    fmt::print(out, "{:<10} = {:<24} [K = max(2(delta+L), 1)]\n", "K", exact(c.K_const));
    fmt::print(out, "{:<10} = {:<24} [B = L/(1-hat_alpha)]\n", "B", exact(c.B));
    fmt::print(out, "{:<10} = {:<24} [hat_alpha = max(r_ess bound, delta)]\n", "hat_alpha",
               exact(c.hat_alpha));
    fmt::print(out, "drift rows_checked = {}, analytic_tail = {}\n", m.drift.rows_checked,
               m.drift.analytic_tail ? "true" : "false");
}

void write_validation(const ValidationSummary& s, std::ostream& out) {
    out << s.describe() << '\n';
}

}  // namespace ergocert::app
