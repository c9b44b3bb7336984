#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqbog/floquet.hpp"
#include "floqbog/model.hpp"
#include "floqbog/sweep.hpp"

namespace floqbog::cli {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NumericsConfig {
    int steps_per_period = 2048;
    int nk = 256;
    int threads = 1;
    FloquetTolerances tol;

    FloquetOptions options() const;
};

struct StabilityGridConfig {
    double hx0 = -1.5;
    double hy0 = 0.0;
    Axis hx1{"hx1", -16.0, 16.0, 201};
    Axis hy1{"hy1", -16.0, 16.0, 201};
};

struct PhaseDiagramConfig {
    Axis axis1{"nu1", 0.0, 6.0, 41};
    Axis axis2{"nu1p", 0.0, 14.0, 41};
};

struct ChainConfig {
    int cells = 20;
    double window_factor = 0.1; ///< midgap window as a fraction of the bulk gap
    double edge_threshold = 0.5;
};

struct EvolveConfig {
    int cells = 20;
    double t_max = 20.0; ///< drive periods
    int samples = 401;
    int steps_per_period = 2048;
};

struct PathConfig {
    ModelParams end;
    int points = 17;
};

struct OutputConfig {
    std::string path = "out/run";
    std::string format = "csv";
};

struct RunConfig {
    ModelParams model;
    NumericsConfig numerics;
    StabilityGridConfig stability_grid;
    PhaseDiagramConfig phase_diagram;
    ChainConfig chain;
    EvolveConfig evolve;
    PathConfig path;
    OutputConfig output;

    /// The effective configuration as JSON, every field spelled out.
    nlohmann::json to_json() const;
};

/// Applies "section.key=value" overrides; the value is parsed as JSON when possible.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Parses and validates a configuration document. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a config file (empty path means defaults), applies overrides, parses.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

} // namespace floqbog::cli
