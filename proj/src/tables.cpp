#include "ergocert/app/tables.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ergocert/error.hpp"

namespace ergocert::app {

double TableEntry::deviation() const {
    if (!published) return 0.0;
    const double diff = std::abs(computed - *published);
    return check == Check::relative ? diff / std::abs(*published) : diff;
}

bool TableEntry::ok() const {
    switch (check) {
        case Check::info:
            return true;
        case Check::exact:
            return published && computed == *published;
        case Check::relative:
        case Check::absolute:
            return published && deviation() <= tolerance;
    }
    return false;
}

bool Table::ok() const {
    for (const auto& e : entries) {
        if (!e.ok()) return false;
    }
    return true;
}

namespace {

using Check = TableEntry::Check;

CertificationParams fixed(double rho_k, std::optional<double> vartheta, std::optional<double> r,
                          const Tolerances& tol) {
    CertificationParams p;
    p.rho_k = rho_k;
    p.vartheta = vartheta;
    p.r_k = r;
    p.tol = tol;
    return p;
}

LevelRecord level(const ResolvedModel& m, std::size_t k, const CertificationParams& p) {
    LevelRecord r = analyse_level(m.kernel, m.V, m.core, std::nullopt, p, k);
    if (!r.analyzed) throw Error(fmt::format("level {} not analysed: {}", k, r.reason));
    return r;
}

}  // namespace

Table table2(const ResolvedModel& m, const Tolerances& tol) {
    Table t{"table2", "Truncation bounds at rho_k = 0.75, vartheta = 0.09, r_k = 0.9", {}};
    const std::size_t ks[] = {15, 25, 35, 45};
    const double rho_tilde[] = {0.6018, 0.6142, 0.6177, 0.6192};
    const double C[] = {4.1539, 4.1540, 4.1540, 4.3736};
    const double tv[] = {8.44e-2, 5.712e-5, 3.277e-8, 1.733e-11};
    const auto p = fixed(0.75, 0.09, 0.9, tol);
    for (int i = 0; i < 4; ++i) {
        const auto r = level(m, ks[i], p);
        const std::string k = fmt::format("k={}", ks[i]);
        t.entries.push_back({k + " rho_tilde", r.analysis.rho_tilde, rho_tilde[i], Check::absolute, 1e-3});
        t.entries.push_back({k + " s", double(r.analysis.s), 4.0, Check::exact, 0.0});
        t.entries.push_back({k + " C_k", r.analysis.C_k, C[i], Check::relative, 0.02});
        t.entries.push_back({k + " tv_direct", r.tv_direct, tv[i], Check::relative, 0.10});
        t.entries.push_back({k + " k1", double(r.k1), 20.0, Check::exact, 0.0});
        std::optional<double> c_published;
        std::optional<double> tvr_published;
        if (ks[i] == 25) {
            c_published = 4.715e5;
            tvr_published = 1.112e-1;
        } else if (ks[i] == 45) {
            c_published = 4.816e5;
            tvr_published = 1.946e-8;
        }
        t.entries.push_back({k + " c_k", r.c_k, c_published, c_published ? Check::relative : Check::info, 0.05});
        t.entries.push_back({k + " tv_from_rate", r.tv_from_rate.value_or(NAN), tvr_published,
                             tvr_published ? Check::relative : Check::info, 0.10});
    }
    return t;
}

Table table1(const ResolvedModel& m, const Tolerances& tol) {
    Table t{"table1", "Rate/constant trade-off at k = 45, rho_k = 0.75", {}};
    const double r[] = {0.87, 0.78, 0.76};
    const double theta[] = {0.023, 0.020, 0.0095};
    const double published[] = {1.924e7, 4.610e11, 1.348e14};
    double prev = 0.0;
    bool increasing = true;
    for (int i = 0; i < 3; ++i) {
        const auto rec = level(m, 45, fixed(0.75, theta[i], r[i], tol));
        t.entries.push_back({fmt::format("r={} (vartheta={}) c_45", r[i], theta[i]), rec.c_k, published[i],
                             Check::relative, 0.10});
        increasing = increasing && rec.c_k > prev;
        prev = rec.c_k;
    }
    t.entries.push_back({"c_45 increasing as r decreases", increasing ? 1.0 : 0.0, 1.0, Check::exact, 0.0});
    return t;
}

Table table3a(const ResolvedModel& m, const Tolerances& tol) {
    Table t{"table3a", "Rate bound ||P^n - pi||_1 <= c_k r_k^{n+1} at r_k = 0.925, n = 300", {}};
    const std::size_t ks[] = {30, 50};
    const double c_published[] = {1.675e6, 6.533e6};
    const double pn_published[] = {1.497e-7, 5.839e-7};
    for (int i = 0; i < 2; ++i) {
        const std::string k = fmt::format("k={}", ks[i]);
        const auto rec = level(m, ks[i], fixed(0.75, std::nullopt, 0.925, tol));
        t.entries.push_back({k + " c_k (grid vartheta)", rec.c_k, c_published[i], Check::info, 0.0});
        t.entries.push_back({k + " vartheta (grid)", rec.analysis.vartheta, std::nullopt, Check::info, 0.0});
        t.entries.push_back({k + " pn_bound(300) from published c_k", pn_bound(300, c_published[i], 0.925),
                             pn_published[i], Check::relative, 0.05});
        t.entries.push_back({k + " pn_bound(300) from computed c_k", pn_bound(300, rec.c_k, 0.925),
                             std::nullopt, Check::info, 0.0});
    }
    return t;
}

Table table3b(const ResolvedModel& m, const Tolerances& tol) {
    Table t{"table3b", "n(eps) from the rate bound at k = 35, r_35 = 0.9", {}};
    const auto rec = level(m, 35, fixed(0.75, std::nullopt, 0.9, tol));
    t.entries.push_back({"vartheta (grid)", rec.analysis.vartheta, std::nullopt, Check::info, 0.0});
    t.entries.push_back({"c_35", rec.c_k, std::nullopt, Check::info, 0.0});
    const double eps[] = {1e-2, 1e-4, 1e-6};
    const double published[] = {28, 34, 40};
    for (int i = 0; i < 3; ++i) {
        const auto n = n_for_epsilon(eps[i], rec.c_k, 0.9, m.core, m.V);
        t.entries.push_back({fmt::format("n(eps={:g})", eps[i]), double(n), published[i], Check::exact, 0.0});
    }
    return t;
}

std::vector<Table> all_tables(const ResolvedModel& m, const Tolerances& tol) {
    return {table1(m, tol), table2(m, tol), table3a(m, tol), table3b(m, tol)};
}

void write_table(const Table& t, const std::string& format, std::ostream& out) {
    auto status = [](const TableEntry& e) {
        if (e.check == Check::info) return "info";
        return e.ok() ? "ok" : "DEVIATION";
    };
    auto tol_text = [](const TableEntry& e) -> std::string {
        switch (e.check) {
            case Check::relative: return fmt::format("rel {:g}", e.tolerance);
            case Check::absolute: return fmt::format("abs {:g}", e.tolerance);
            case Check::exact: return "exact";
            case Check::info: return "";
        }
        return "";
    };
    auto published = [](const TableEntry& e) { return e.published ? fmt::format("{:.4g}", *e.published) : std::string(); };
    auto dev = [](const TableEntry& e) { return e.published ? fmt::format("{:.3e}", e.deviation()) : std::string(); };
    if (format == "md") {
        fmt::print(out, "### {}\n\n| quantity | computed | published | deviation | tolerance | status |\n", t.title);
        fmt::print(out, "|---|---|---|---|---|---|\n");
        for (const auto& e : t.entries) {
            fmt::print(out, "| {} | {:.6g} | {} | {} | {} | {} |\n", e.label, e.computed, published(e), dev(e),
                       tol_text(e), status(e));
        }
    } else {
        fmt::print(out, "quantity,computed,published,deviation,tolerance,status\n");
        for (const auto& e : t.entries) {
            fmt::print(out, "\"{}\",{:.17g},{},{},{},{}\n", e.label, e.computed, published(e), dev(e),
                       tol_text(e), status(e));
        }
    }
}

}  // namespace ergocert::app
