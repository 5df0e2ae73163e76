#include "ergocert/app/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "ergocert/app/config.hpp"
#include "ergocert/app/plot.hpp"
#include "ergocert/app/report_io.hpp"
#include "ergocert/app/tables.hpp"
#include "ergocert/error.hpp"

namespace ergocert::app {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::optional<std::size_t> k0;
    std::optional<double> vartheta;
    std::optional<double> rk;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    bool plot = false;
    bool no_oracle = false;
};

RunConfig load(const Options& o) {
    RunConfig cfg = o.config.empty() ? example_config() : load_config(o.config);
    if (o.k0) cfg.algorithm.initial_k = *o.k0;
    if (o.vartheta) cfg.algorithm.vartheta = *o.vartheta;
    if (o.rk) cfg.algorithm.r_k = *o.rk;
    if (o.out_dir) cfg.output.dir = *o.out_dir;
    if (o.format) cfg.output.format = *o.format;
    if (o.plot) cfg.output.plot = true;
    if (o.no_oracle) cfg.oracle.enabled = false;
    return cfg;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output.dir);
    const auto path = fs::path(cfg.output.dir) / name;
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write " + path.string());
    return f;
}

int cmd_drift(const RunConfig& cfg, std::ostream& out) {
    const auto m = resolve(cfg);
    write_drift_summary(m, out);
    return kOk;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto m = resolve(cfg);
    const auto run = run_certification(m.kernel, m.V, m.core, cfg.rho_prior, cfg.algorithm);
    {
        auto f = open_out(cfg, cfg.output.report);
        write_report_csv(run, f);
    }
    {
        auto f = open_out(cfg, cfg.output.trace);
        write_trace(run, f);
    }
    write_trace(run, out);
    if (!run.result) {
        fmt::print(err, "exhausted: k >= k1 never held for k <= {}\n", cfg.algorithm.k_cap);
        return kExhausted;
    }
    {
        auto f = open_out(cfg, cfg.output.provenance);
        write_provenance(*run.result, f);
    }

    std::optional<OracleReference> oracle;
    if (cfg.oracle.enabled) {
        std::size_t max_k = run.result->k();
        for (const auto& r : run.analysed_levels()) max_k = std::max(max_k, r.k);
        const std::size_t k_ref = cfg.oracle.k_ref.value_or(
            std::max(default_oracle_level(m.core, m.V), 4 * max_k));
        oracle = build_oracle(m.kernel, m.V, k_ref, cfg.oracle.n_max);
        try {
            const auto summary = validate(run, *oracle, m.kernel);
            auto f = open_out(cfg, "validation.log");
            fmt::print(f, "k_ref = {}\n", k_ref);
            write_validation(summary, f);
            fmt::print(out, "validation: {} checks passed, min bound/measured ratio {:.4g}\n",
                       summary.margins.size(), summary.min_ratio);
        } catch (const SoundnessViolation& e) {
            auto f = open_out(cfg, "validation.log");
            fmt::print(f, "k_ref = {}\n{}\n", k_ref, e.what());
            fmt::print(err, "soundness violation: {}\n", e.what());
            return kError;
        }
    }

    if (cfg.output.plot) {
        Series direct{"tv_direct", {}}, rate{"tv_from_rate", {}};
        for (const auto& r : run.analysed_levels()) {
            direct.points.emplace_back(double(r.k), r.tv_direct);
            if (r.tv_from_rate) rate.points.emplace_back(double(r.k), *r.tv_from_rate);
        }
        auto f = open_out(cfg, "bounds_vs_k.svg");
        write_svg_chart({direct, rate}, "TV bounds versus truncation level", "k", "bound", f);

        Series pn{"c_k r_k^(n+1)", {}}, measured{"measured", {}};
        for (std::size_t n = 0; n <= cfg.oracle.n_max; ++n) {
            pn.points.emplace_back(double(n), run.result->pn_bound(n));
            if (oracle) measured.points.emplace_back(double(n), oracle->pn_measurements[n]);
        }
        std::vector<Series> series{pn};
        if (oracle) series.push_back(measured);
        auto g = open_out(cfg, "pn_vs_n.svg");
        write_svg_chart(series, "||P^n - pi||_1 bound versus n", "n", "norm", g);
    }
    fmt::print(out, "accepted k = {}, r_k = {}, c_k = {:.4e}\n", run.result->k(), run.result->r_k(),
               run.result->c_k());
    return kOk;
}

int cmd_tables(const RunConfig& cfg, std::ostream& out) {
    const auto m = resolve(cfg);
    const auto tables = all_tables(m, cfg.algorithm.tol);
    bool ok = true;
    for (const auto& t : tables) {
        auto f = open_out(cfg, t.name + "." + cfg.output.format);
        write_table(t, cfg.output.format, f);
        write_table(t, "md", out);
        out << '\n';
        ok = ok && t.ok();
    }
    if (!ok) {
        fmt::print(out, "one or more published values deviate beyond tolerance\n");
        return kTableDeviation;
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certified convergence-rate and truncation-error bounds for Markov chains", "ergocert"};
    app.require_subcommand(1);
    Options o;
    std::string format;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON run configuration (default: built-in random-walk example)");
        sub->add_option("--out", o.out_dir, "output directory (default: output.dir or .)");
    };
    auto* drift = app.add_subcommand("drift", "print gamma_hat, delta, L, A, K, B, hat_alpha");
    common(drift);
    auto* certify = app.add_subcommand("certify", "run the truncation certification loop and validate it");
    common(certify);
    certify->add_option("--k0", o.k0, "initial truncation level (default 15 in the example, 2 otherwise)");
    certify->add_option("--vartheta", o.vartheta, "fixed vartheta (default: grid search)");
    certify->add_option("--rk", o.rk, "fixed r_k (default: grid search)");
    certify->add_flag("--plot", o.plot, "write SVG charts of the bounds");
    certify->add_flag("--no-oracle", o.no_oracle, "skip the brute-force soundness validation");
    auto* tables = app.add_subcommand("tables", "reproduce the published tables with deviations");
    common(tables);
    tables->add_option("--format", o.format, "csv or md (default csv)")->check(CLI::IsMember({"csv", "md"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kError;
    }

    try {
        const RunConfig cfg = load(o);
        if (drift->parsed()) return cmd_drift(cfg, out);
        if (certify->parsed()) return cmd_certify(cfg, out, err);
        return cmd_tables(cfg, out);
    } catch (const Error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kError;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kError;
    }
}

}  // namespace ergocert::app
