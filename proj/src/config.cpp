#include "ergocert/app/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ergocert/error.hpp"
#include "json.hpp"

namespace ergocert::app {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw InvalidArgument(where + ": expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw InvalidArgument(where + ": unknown key '" + key + "'");
    }
}

// A probability written as a number or as "p/q".
double probability(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        const auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return std::stod(s);
            const double num = std::stod(s.substr(0, slash));
            const double den = std::stod(s.substr(slash + 1));
            if (den == 0.0) throw InvalidArgument(where + ": zero denominator");
            return num / den;
        } catch (const std::logic_error&) {
            throw InvalidArgument(where + ": cannot parse '" + s + "'");
        }
    }
    throw InvalidArgument(where + ": expected a number or a \"p/q\" string");
}

std::vector<double> probability_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw InvalidArgument(where + ": expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(probability(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument(where + "." + key + ": missing or of the wrong type");
    }
}

std::size_t count(const json& obj, const char* key, const std::string& where) {
    const auto v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw InvalidArgument(where + "." + key + ": expected a nonnegative integer");
    }
    return v.get<std::size_t>();
}

void parse_model(const json& m, ModelConfig& out) {
    only_keys(m, "model", {"kind", "g", "d", "c", "increments", "boundary", "rows", "tail"});
    const auto kind = get<std::string>(m, "kind", "model");
    if (kind == "random_walk") {
        out.kind = ModelConfig::Kind::random_walk;
        auto& w = out.walk;
        w.g = count(m, "g", "model");
        w.d = count(m, "d", "model");
        w.c = count(m, "c", "model");
        w.increments = probability_list(m.at("increments"), "model.increments");
        const auto& b = m.at("boundary");
        if (!b.is_array()) throw InvalidArgument("model.boundary: expected an array of rows");
        w.boundary.clear();
        for (std::size_t i = 0; i < b.size(); ++i) {
            w.boundary.push_back(probability_list(b[i], "model.boundary[" + std::to_string(i) + "]"));
        }
        w.validate();
    } else if (kind == "explicit") {
        out.kind = ModelConfig::Kind::explicit_kernel;
        auto& e = out.explicit_kernel;
        const auto& rows = m.at("rows");
        if (!rows.is_array()) throw InvalidArgument("model.rows: expected an array");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string where = "model.rows[" + std::to_string(i) + "]";
            Row r;
            for (const auto& entry : rows[i]) {
                if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer()) {
                    throw InvalidArgument(where + ": entries must be [column, probability]");
                }
                r.push_back({entry[0].get<std::size_t>(), probability(entry[1], where)});
            }
            e.rows.push_back(std::move(r));
        }
        const auto& tail = m.at("tail");
        only_keys(tail, "model.tail", {"g", "increments"});
        e.g = count(tail, "g", "model.tail");
        e.increments = probability_list(tail.at("increments"), "model.tail.increments");
    } else {
        throw InvalidArgument("model.kind must be 'random_walk' or 'explicit'");
    }
}

void parse_weight(const json& w, WeightConfig& out) {
    only_keys(w, "weight", {"kind", "gamma", "values"});
    const auto kind = get<std::string>(w, "kind", "weight");
    if (kind == "geometric") {
        const auto& g = w.contains("gamma") ? w.at("gamma") : json("auto");
        if (g.is_string() && g.get<std::string>() == "auto") {
            out.kind = WeightConfig::Kind::geometric_auto;
        } else if (g.is_number()) {
            out.kind = WeightConfig::Kind::geometric;
            out.gamma = g.get<double>();
        } else {
            throw InvalidArgument("weight.gamma: expected a number or \"auto\"");
        }
    } else if (kind == "tabulated") {
        out.kind = WeightConfig::Kind::tabulated;
        out.table = get<std::vector<double>>(w, "values", "weight");
    } else {
        throw InvalidArgument("weight.kind must be 'geometric' or 'tabulated'");
    }
}

void parse_algorithm(const json& a, RunConfig& cfg) {
    only_keys(a, "algorithm",
              {"initial_k", "stride", "k_cap", "rho_margin", "rho_k", "vartheta", "r_k", "horizon",
               "grid_points", "s_cap", "with_eps0", "report_levels", "rho_prior"});
    auto& p = cfg.algorithm;
    const std::string w = "algorithm";
    if (a.contains("initial_k")) p.initial_k = count(a, "initial_k", w);
    if (a.contains("stride")) p.stride = count(a, "stride", w);
    if (a.contains("k_cap")) p.k_cap = count(a, "k_cap", w);
    if (a.contains("rho_margin")) p.rho_margin = get<double>(a, "rho_margin", w);
    if (a.contains("rho_k")) p.rho_k = get<double>(a, "rho_k", w);
    if (a.contains("vartheta")) p.vartheta = get<double>(a, "vartheta", w);
    if (a.contains("r_k")) p.r_k = get<double>(a, "r_k", w);
    if (a.contains("horizon")) p.horizon = count(a, "horizon", w);
    if (a.contains("grid_points")) p.grid_points = count(a, "grid_points", w);
    if (a.contains("s_cap")) p.s_cap = count(a, "s_cap", w);
    if (a.contains("with_eps0")) p.with_eps0 = get<bool>(a, "with_eps0", w);
    if (a.contains("report_levels")) p.report_levels = get<std::vector<std::size_t>>(a, "report_levels", w);
    if (a.contains("rho_prior")) cfg.rho_prior = get<double>(a, "rho_prior", w);
}

void parse_tolerances(const json& t, Tolerances& tol) {
    only_keys(t, "tolerances",
              {"row_sum", "drift_slack", "unit_eigenvalue", "peripheral", "stationary_residual"});
    const std::string w = "tolerances";
    if (t.contains("row_sum")) tol.row_sum = get<double>(t, "row_sum", w);
    if (t.contains("drift_slack")) tol.drift_slack = get<double>(t, "drift_slack", w);
    if (t.contains("unit_eigenvalue")) tol.unit_eigenvalue = get<double>(t, "unit_eigenvalue", w);
    if (t.contains("peripheral")) tol.peripheral = get<double>(t, "peripheral", w);
    if (t.contains("stationary_residual")) {
        tol.stationary_residual = get<double>(t, "stationary_residual", w);
    }
}

}  // namespace

static RunConfig parse_document(const json& root) {
    only_keys(root, "config",
              {"model", "weight", "drift", "r_ess", "algorithm", "tolerances", "oracle", "output"});
    RunConfig cfg;
    if (!root.contains("model")) throw InvalidArgument("config: 'model' section is required");
    parse_model(root.at("model"), cfg.model);
    if (root.contains("weight")) parse_weight(root.at("weight"), cfg.weight);
    if (root.contains("drift")) {
        const auto& d = root.at("drift");
        only_keys(d, "drift", {"delta", "L", "rows", "allow_numeric_tail"});
        if (d.contains("delta")) cfg.drift.delta = get<double>(d, "delta", "drift");
        if (d.contains("L")) cfg.drift.L = get<double>(d, "L", "drift");
        if (d.contains("rows")) cfg.drift.rows = count(d, "rows", "drift");
        if (d.contains("allow_numeric_tail")) {
            cfg.drift.allow_numeric_tail = get<bool>(d, "allow_numeric_tail", "drift");
        }
    }
    if (root.contains("r_ess")) {
        const auto& r = root.at("r_ess");
        only_keys(r, "r_ess", {"source", "nu_mass", "nu_V", "N", "deltaN", "LN"});
        const auto src = get<std::string>(r, "source", "r_ess");
        if (src == "model") {
            cfg.r_ess.source = RessConfig::Source::model;
        } else if (src == "delta") {
            cfg.r_ess.source = RessConfig::Source::delta;
        } else if (src == "minorization") {
            cfg.r_ess.source = RessConfig::Source::minorization;
            cfg.r_ess.nu_mass = get<double>(r, "nu_mass", "r_ess");
            cfg.r_ess.nu_V = get<double>(r, "nu_V", "r_ess");
            if (r.contains("N")) cfg.r_ess.N = count(r, "N", "r_ess");
            if (r.contains("deltaN")) cfg.r_ess.deltaN = get<double>(r, "deltaN", "r_ess");
            if (r.contains("LN")) cfg.r_ess.LN = get<double>(r, "LN", "r_ess");
        } else {
            throw InvalidArgument("r_ess.source must be 'model', 'delta' or 'minorization'");
        }
    }
    if (root.contains("algorithm")) parse_algorithm(root.at("algorithm"), cfg);
    if (root.contains("tolerances")) parse_tolerances(root.at("tolerances"), cfg.algorithm.tol);
    if (root.contains("oracle")) {
        const auto& o = root.at("oracle");
        only_keys(o, "oracle", {"enabled", "k_ref", "n_max"});
        if (o.contains("enabled")) cfg.oracle.enabled = get<bool>(o, "enabled", "oracle");
        if (o.contains("k_ref")) cfg.oracle.k_ref = count(o, "k_ref", "oracle");
        if (o.contains("n_max")) cfg.oracle.n_max = count(o, "n_max", "oracle");
    }
    if (root.contains("output")) {
        const auto& o = root.at("output");
        only_keys(o, "output", {"dir", "report", "trace", "provenance", "format", "plot"});
        auto& out = cfg.output;
        if (o.contains("dir")) out.dir = get<std::string>(o, "dir", "output");
        if (o.contains("report")) out.report = get<std::string>(o, "report", "output");
        if (o.contains("trace")) out.trace = get<std::string>(o, "trace", "output");
        if (o.contains("provenance")) out.provenance = get<std::string>(o, "provenance", "output");
        if (o.contains("format")) out.format = get<std::string>(o, "format", "output");
        if (o.contains("plot")) out.plot = get<bool>(o, "plot", "output");
        if (out.format != "csv" && out.format != "md") {
            throw InvalidArgument("output.format must be 'csv' or 'md'");
        }
    }
    return cfg;
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return parse_document(root);
    } catch (const json::exception& e) {
        // Missing keys and type mismatches surface as library exceptions.
        throw InvalidArgument(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

RunConfig example_config() {
    RunConfig cfg;
    cfg.model.walk = reference_walk();
    cfg.algorithm.initial_k = 15;
    cfg.algorithm.stride = 10;
    cfg.algorithm.rho_k = 0.75;
    cfg.algorithm.vartheta = 0.09;
    cfg.algorithm.r_k = 0.9;
    cfg.algorithm.report_levels = {15, 25, 35, 45};
    return cfg;
}

namespace {

DiscreteKernel build_kernel(const RunConfig& cfg) {
    if (cfg.model.kind == ModelConfig::Kind::random_walk) {
        return make_kernel(cfg.model.walk, cfg.algorithm.tol);
    }
    const auto& e = cfg.model.explicit_kernel;
    return DiscreteKernel::homogeneous(e.rows, e.g, e.increments, cfg.algorithm.tol);
}

}  // namespace

ResolvedModel resolve(const RunConfig& cfg) {
    const bool walk = cfg.model.kind == ModelConfig::Kind::random_walk;
    std::optional<GammaSolution> gamma;
    if (walk) gamma = solve_gamma_hat(cfg.model.walk);

    auto V = [&] {
        switch (cfg.weight.kind) {
            case WeightConfig::Kind::geometric_auto:
                if (!gamma) throw InvalidArgument("weight.gamma = \"auto\" needs a random_walk model");
                return WeightSequence::geometric(gamma->gamma_hat);
            case WeightConfig::Kind::geometric:
                return WeightSequence::geometric(cfg.weight.gamma);
            case WeightConfig::Kind::tabulated:
                break;
        }
        return WeightSequence::tabulated(cfg.weight.table);
    }();

    DiscreteKernel kernel = build_kernel(cfg);
    DriftOptions opts;
    opts.allow_numeric_tail = cfg.drift.allow_numeric_tail;
    opts.tol = cfg.algorithm.tol;

    DriftCertificate drift;
    const bool derived =
        walk && cfg.weight.kind == WeightConfig::Kind::geometric_auto && !cfg.drift.delta && !cfg.drift.L;
    if (derived) {
        drift = drift_params(cfg.model.walk, *gamma, cfg.algorithm.tol);
    } else {
        if (!cfg.drift.delta || !cfg.drift.L) {
            throw InvalidArgument("drift.delta and drift.L are required unless derived from a random walk");
        }
        drift = verify_drift(kernel, V, *cfg.drift.delta, *cfg.drift.L, cfg.drift.rows, opts);
    }

    double r_ess = drift.delta;
    switch (cfg.r_ess.source) {
        case RessConfig::Source::model:
        case RessConfig::Source::delta:
            // For the random walk the essential radius equals delta; otherwise the
            // drift bound r_ess <= delta is the fallback.
            r_ess = drift.delta;
            break;
        case RessConfig::Source::minorization:
            r_ess = ress_bound_iterate(cfg.r_ess.deltaN.value_or(drift.delta),
                                       cfg.r_ess.LN.value_or(drift.L), cfg.r_ess.nu_mass,
                                       cfg.r_ess.nu_V, cfg.r_ess.N);
            break;
    }
    const CoreConstants core = core_constants(drift, r_ess);
    return ResolvedModel{std::move(kernel), std::move(V), drift, core, r_ess, gamma};
}

}  // namespace ergocert::app
