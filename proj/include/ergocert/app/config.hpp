#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ergocert/bounds.hpp"
#include "ergocert/certify.hpp"
#include "ergocert/kernel.hpp"
#include "ergocert/random_walk.hpp"

namespace ergocert::app {

/// Explicit kernel: boundary rows plus a homogeneous tail law.
struct ExplicitKernelSpec {
    std::vector<Row> rows;
    std::size_t g = 0;
    std::vector<double> increments;  ///< a_{-g..d}
};

struct ModelConfig {
    enum class Kind { random_walk, explicit_kernel };
    Kind kind = Kind::random_walk;
    RandomWalkSpec walk;
    ExplicitKernelSpec explicit_kernel;
};

struct WeightConfig {
    enum class Kind { geometric_auto, geometric, tabulated };
    Kind kind = Kind::geometric_auto;
    double gamma = 0.0;
    std::vector<double> table;
};

struct DriftConfig {
    std::optional<double> delta;
    std::optional<double> L;
    std::size_t rows = 100;
    bool allow_numeric_tail = true;
};

/// Source of the essential spectral radius bound.
struct RessConfig {
    enum class Source { model, delta, minorization };
    Source source = Source::model;
    double nu_mass = 0.0;
    double nu_V = 0.0;
    std::size_t N = 1;
    std::optional<double> deltaN;
    std::optional<double> LN;
};

struct OracleConfig {
    bool enabled = true;
    std::optional<std::size_t> k_ref;
    std::size_t n_max = 300;
};

struct OutputConfig {
    std::string dir = ".";
    std::string report = "report.csv";
    std::string trace = "trace.log";
    std::string provenance = "provenance.log";
    std::string format = "csv";
    bool plot = false;
};

struct RunConfig {
    ModelConfig model;
    WeightConfig weight;
    DriftConfig drift;
    RessConfig r_ess;
    CertificationParams algorithm;
    std::optional<double> rho_prior;
    OracleConfig oracle;
    OutputConfig output;
};

/// Parse a JSON document; unknown keys and malformed values raise InvalidArgument.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Configuration reproducing the worked random-walk example.
RunConfig example_config();

/// Kernel, weight, drift and core constants derived from a configuration.
struct ResolvedModel {
    DiscreteKernel kernel;
    WeightSequence V;
    DriftCertificate drift;
    CoreConstants core;
    double r_ess_bound = 0.0;
    std::optional<GammaSolution> gamma;
};

ResolvedModel resolve(const RunConfig& cfg);

}  // namespace ergocert::app
