#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace floqbog::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError((where.empty() ? key : where + "." + key) + ": unknown key");
}

std::string join(const std::string& where, const std::string& key)
{
    return where.empty() ? key : where + "." + key;
}

void read_number(const json& obj, const std::string& where, const std::string& key, double& out)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>()))
        throw ConfigError(join(where, key) + ": expected a finite number");
    out = v.get<double>();
}

void read_int(const json& obj, const std::string& where, const std::string& key, int& out, int min_value)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(join(where, key) + ": expected an integer");
    out = v.get<int>();
    if (out < min_value)
        throw ConfigError(join(where, key) + ": must be >= " + std::to_string(min_value));
}

void read_string(const json& obj, const std::string& where, const std::string& key, std::string& out)
{
    if (!obj.contains(key))
        return;
    if (!obj.at(key).is_string())
        throw ConfigError(join(where, key) + ": expected a string");
    out = obj.at(key).get<std::string>();
}

void read_model(const json& obj, const std::string& where, ModelParams& p)
{
    reject_unknown(obj, where, {"nu0", "nu0p", "nu1", "nu1p", "g", "mu", "omega"});
    read_number(obj, where, "nu0", p.nu0);
    read_number(obj, where, "nu0p", p.nu0p);
    read_number(obj, where, "nu1", p.nu1);
    read_number(obj, where, "nu1p", p.nu1p);
    read_number(obj, where, "g", p.g);
    read_number(obj, where, "mu", p.mu);
    read_number(obj, where, "omega", p.omega);
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

void read_axis(const json& obj, const std::string& where, Axis& axis, bool named)
{
    if (named)
        reject_unknown(obj, where, {"param", "min", "max", "count"});
    else
        reject_unknown(obj, where, {"min", "max", "count"});
    if (named) {
        read_string(obj, where, "param", axis.name);
        try {
            parse_param(axis.name);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(join(where, "param") + ": " + e.what());
        }
    }
    read_number(obj, where, "min", axis.min);
    read_number(obj, where, "max", axis.max);
    read_int(obj, where, "count", axis.count, 2);
    if (!(axis.min < axis.max))
        throw ConfigError(where + ": min must be smaller than max");
}

json axis_json(const Axis& a, bool named)
{
    json j{{"min", a.min}, {"max", a.max}, {"count", a.count}};
    if (named)
        j["param"] = a.name;
    return j;
}

json model_json(const ModelParams& p)
{
    return {{"nu0", p.nu0}, {"nu0p", p.nu0p}, {"nu1", p.nu1},       {"nu1p", p.nu1p},
            {"g", p.g},     {"mu", p.mu},     {"omega", p.omega}};
}

} // namespace

FloquetOptions NumericsConfig::options() const
{
    FloquetOptions o;
    o.steps = steps_per_period;
    o.threads = threads;
    o.tol = tol;
    return o;
}

json RunConfig::to_json() const
{
    json j;
    j["model"] = model_json(model);
    j["numerics"] = {{"steps_per_period", numerics.steps_per_period},
                     {"nk", numerics.nk},
                     {"threads", numerics.threads},
                     {"tol_im", numerics.tol.tol_im},
                     {"tol_norm", numerics.tol.tol_norm},
                     {"resonance_window", numerics.tol.resonance_window_rel},
                     {"tol_sympl", numerics.tol.tol_sympl}};
    j["stability_grid"] = {{"hx0", stability_grid.hx0},
                           {"hy0", stability_grid.hy0},
                           {"hx1", axis_json(stability_grid.hx1, false)},
                           {"hy1", axis_json(stability_grid.hy1, false)}};
    j["phase_diagram"] = {{"axis1", axis_json(phase_diagram.axis1, true)},
                          {"axis2", axis_json(phase_diagram.axis2, true)}};
    j["chain"] = {{"cells", chain.cells},
                  {"window_factor", chain.window_factor},
                  {"edge_threshold", chain.edge_threshold}};
    j["evolve"] = {{"cells", evolve.cells},
                   {"t_max", evolve.t_max},
                   {"samples", evolve.samples},
                   {"steps_per_period", evolve.steps_per_period}};
    j["path"] = {{"end", model_json(path.end)}, {"points", path.points}};
    j["output"] = {{"path", output.path}, {"format", output.format}};
    return j;
}

void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "': expected key.path=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            throw ConfigError("override '" + assignment + "': empty key segment");
        if (!node->is_object())
            *node = json::object();
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

RunConfig parse_config(const json& doc)
{
    RunConfig cfg;
    cfg.model = ModelParams{1.5, 0.0, 3.0, 11.0, 1.0, -5.0, 5.2};
    if (doc.is_null())
        return cfg;
    reject_unknown(doc, "", {"model", "numerics", "stability_grid", "phase_diagram", "chain", "evolve", "path", "output"});

    if (doc.contains("model"))
        read_model(doc.at("model"), "model", cfg.model);
    cfg.path.end = cfg.model;
    cfg.path.end.nu1p = 0.0;

    if (doc.contains("numerics")) {
        const json& n = doc.at("numerics");
        reject_unknown(n, "numerics",
                       {"steps_per_period", "nk", "threads", "tol_im", "tol_norm", "resonance_window", "tol_sympl"});
        read_int(n, "numerics", "steps_per_period", cfg.numerics.steps_per_period, 64);
        read_int(n, "numerics", "nk", cfg.numerics.nk, 64);
        read_int(n, "numerics", "threads", cfg.numerics.threads, 1);
        read_number(n, "numerics", "tol_im", cfg.numerics.tol.tol_im);
        read_number(n, "numerics", "tol_norm", cfg.numerics.tol.tol_norm);
        read_number(n, "numerics", "resonance_window", cfg.numerics.tol.resonance_window_rel);
        read_number(n, "numerics", "tol_sympl", cfg.numerics.tol.tol_sympl);
        for (const char* key : {"tol_im", "tol_norm", "resonance_window", "tol_sympl"})
            if (n.contains(key) && !(n.at(key).get<double>() > 0.0))
                throw ConfigError(std::string("numerics.") + key + ": must be positive");
    }

    if (doc.contains("stability_grid")) {
        const json& s = doc.at("stability_grid");
        reject_unknown(s, "stability_grid", {"hx0", "hy0", "hx1", "hy1"});
        read_number(s, "stability_grid", "hx0", cfg.stability_grid.hx0);
        read_number(s, "stability_grid", "hy0", cfg.stability_grid.hy0);
        if (s.contains("hx1"))
            read_axis(s.at("hx1"), "stability_grid.hx1", cfg.stability_grid.hx1, false);
        if (s.contains("hy1"))
            read_axis(s.at("hy1"), "stability_grid.hy1", cfg.stability_grid.hy1, false);
    }

    if (doc.contains("phase_diagram")) {
        const json& s = doc.at("phase_diagram");
        reject_unknown(s, "phase_diagram", {"axis1", "axis2"});
        if (s.contains("axis1"))
            read_axis(s.at("axis1"), "phase_diagram.axis1", cfg.phase_diagram.axis1, true);
        if (s.contains("axis2"))
            read_axis(s.at("axis2"), "phase_diagram.axis2", cfg.phase_diagram.axis2, true);
        if (cfg.phase_diagram.axis1.name == cfg.phase_diagram.axis2.name)
            throw ConfigError("phase_diagram: axis1 and axis2 must name different parameters");
    }

    if (doc.contains("chain")) {
        const json& s = doc.at("chain");
        reject_unknown(s, "chain", {"cells", "window_factor", "edge_threshold"});
        read_int(s, "chain", "cells", cfg.chain.cells, 2);
        read_number(s, "chain", "window_factor", cfg.chain.window_factor);
        read_number(s, "chain", "edge_threshold", cfg.chain.edge_threshold);
        if (!(cfg.chain.window_factor > 0.0))
            throw ConfigError("chain.window_factor: must be positive");
        if (!(cfg.chain.edge_threshold >= 0.0 && cfg.chain.edge_threshold <= 1.0))
            throw ConfigError("chain.edge_threshold: must lie in [0, 1]");
    }

    if (doc.contains("evolve")) {
        const json& s = doc.at("evolve");
        reject_unknown(s, "evolve", {"cells", "t_max", "samples", "steps_per_period"});
        read_int(s, "evolve", "cells", cfg.evolve.cells, 2);
        read_number(s, "evolve", "t_max", cfg.evolve.t_max);
        read_int(s, "evolve", "samples", cfg.evolve.samples, 2);
        read_int(s, "evolve", "steps_per_period", cfg.evolve.steps_per_period, 64);
        if (!(cfg.evolve.t_max > 0.0))
            throw ConfigError("evolve.t_max: must be positive");
    }

    if (doc.contains("path")) {
        const json& s = doc.at("path");
        reject_unknown(s, "path", {"end", "points"});
        if (s.contains("end"))
            read_model(s.at("end"), "path.end", cfg.path.end);
        read_int(s, "path", "points", cfg.path.points, 16);
    }

    if (doc.contains("output")) {
        const json& s = doc.at("output");
        reject_unknown(s, "output", {"path", "format"});
        read_string(s, "output", "path", cfg.output.path);
        read_string(s, "output", "format", cfg.output.format);
        if (cfg.output.format != "csv")
            throw ConfigError("output.format: only 'csv' is supported");
        if (cfg.output.path.empty())
            throw ConfigError("output.path: must not be empty");
    }
    return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides)
{
    json doc = json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config: cannot open '" + path + "'");
        try {
            doc = json::parse(in, nullptr, true, true);
        } catch (const json::parse_error& e) {
            throw ConfigError("config: " + std::string(e.what()));
        }
    }
    for (const auto& o : overrides)
        apply_override(doc, o);
    return parse_config(doc);
}

} // namespace floqbog::cli
