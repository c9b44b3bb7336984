#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "floqbog/csv.hpp"
#include "floqbog/dynamics.hpp"
#include "floqbog/effective.hpp"
#include "floqbog/errors.hpp"
#include "floqbog/floquet.hpp"
#include "floqbog/sweep.hpp"
#include "floqbog/topology.hpp"

namespace floqbog::cli {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

/// Collects output files and writes them together with the sidecar.
class OutputSet {
public:
    OutputSet(const RunConfig& cfg, std::string command) : m_cfg(cfg), m_command(std::move(command)) {}

    void add(const std::string& suffix, std::string content)
    {
        m_files.emplace_back(m_cfg.output.path + suffix, std::move(content));
    }

    CommandResult finish(json summary) const
    {
        const fs::path parent = fs::path(m_cfg.output.path).parent_path();
        if (!parent.empty())
            fs::create_directories(parent);

        json files = json::array();
        CommandResult result;
        for (const auto& [path, content] : m_files) {
            write_file(path, content);
            files.push_back(fs::path(path).filename().string());
            result.files.push_back(path);
        }
        json sidecar;
        sidecar["command"] = m_command;
        sidecar["version"] = kVersion;
        sidecar["config"] = m_cfg.to_json();
        sidecar["files"] = files;
        sidecar["summary"] = summary;
        const std::string meta = m_cfg.output.path + ".json";
        write_file(meta, sidecar.dump(2) + "\n");
        result.files.push_back(meta);
        result.summary = std::move(summary);
        return result;
    }

private:
    static void write_file(const std::string& path, const std::string& content)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + path + "'");
        out << content;
        if (!out)
            throw std::runtime_error("write to '" + path + "' failed");
    }

    const RunConfig& m_cfg;
    std::string m_command;
    std::vector<std::pair<std::string, std::string>> m_files;
};

json model_summary(const ModelParams& p)
{
    return {{"nu0", p.nu0}, {"nu0p", p.nu0p}, {"nu1", p.nu1}, {"nu1p", p.nu1p},
            {"g", p.g},     {"mu", p.mu},     {"omega", p.omega}};
}

template <class Cell>
json verdict_counts(const std::vector<Cell>& cells)
{
    int stable = 0, unstable = 0, failed = 0;
    for (const auto& c : cells) {
        if (c.verdict == Verdict::Stable)
            ++stable;
        else if (c.verdict == Verdict::Unstable)
            ++unstable;
        else
            ++failed;
    }
    return {{"stable", stable}, {"unstable", unstable}, {"failed", failed}};
}

} // namespace

CommandResult cmd_spectrum(const RunConfig& cfg)
{
    const ModelParams& p = cfg.model;
    const FloquetOptions opts = cfg.numerics.options();
    const std::vector<double> ks = brillouin_grid(cfg.numerics.nk);
    const std::vector<FloquetSpectrum> spectra = bloch_spectra(p, ks, opts);
    const EffectiveIndices indices = choose_indices(p, cfg.numerics.nk);
    const EffectiveSpectrum eff = effective_spectrum(p, cfg.numerics.nk, indices, cfg.numerics.tol.tol_im);

    const std::size_t nb = spectra.empty() ? 0 : spectra.front().branches.size();
    std::vector<std::string> header{"k"};
    for (std::size_t b = 0; b < nb; ++b) {
        const std::string n = std::to_string(b + 1);
        header.push_back("re_eps_" + n);
        header.push_back("im_eps_" + n);
        header.push_back("cnorm_" + n);
    }
    for (const char* col : {"eff_plus_re", "eff_plus_im", "eff_minus_re", "eff_minus_im"})
        header.emplace_back(col);

    std::ostringstream os;
    CsvWriter csv(os, header);
    double max_im = 0.0;
    int unstable_k = 0, marginal_k = 0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        csv.field(ks[j]);
        for (const auto& br : spectra[j].branches) {
            csv.field(br.eps.real()).field(br.eps.imag()).field(br.cnorm);
            max_im = std::max(max_im, std::abs(br.eps.imag()));
        }
        csv.field(fold_quasienergy(eff.eps_plus[j].real(), p.omega)).field(eff.eps_plus[j].imag());
        csv.field(fold_quasienergy(eff.eps_minus[j].real(), p.omega)).field(eff.eps_minus[j].imag());
        csv.end_row();
        const Stability s = classify_stability(spectra[j].branches, p.omega, opts.tol);
        unstable_k += s == Stability::Unstable;
        marginal_k += s == Stability::MarginallyStable;
    }

    OutputSet outputs(cfg, "spectrum");
    outputs.add(".csv", os.str());
    return outputs.finish({{"max_im", max_im},
                           {"stable", unstable_k == 0},
                           {"strongly_stable", unstable_k == 0 && marginal_k == 0},
                           {"unstable_k_points", unstable_k},
                           {"marginal_k_points", marginal_k},
                           {"effective_alpha", indices.alpha},
                           {"effective_beta", indices.beta},
                           {"effective_stable", eff.stable},
                           {"effective_max_im", eff.max_im},
                           {"effective_validity_warning", eff.validity_warning}});
}

CommandResult cmd_stability_grid(const RunConfig& cfg)
{
    StabilityGridSpec spec;
    spec.hx0 = cfg.stability_grid.hx0;
    spec.hy0 = cfg.stability_grid.hy0;
    spec.mu = cfg.model.mu;
    spec.g = cfg.model.g;
    spec.omega = cfg.model.omega;
    spec.hx1 = cfg.stability_grid.hx1;
    spec.hy1 = cfg.stability_grid.hy1;
    const std::vector<StabilityCell> cells = stability_grid(spec, cfg.numerics.options());

    std::ostringstream grid;
    write_stability_csv(grid, cells);

    std::ostringstream gamma;
    CsvWriter csv(gamma, {"k", "hx1", "hy1"});
    const auto curve = curve_gamma(cfg.model, cfg.numerics.nk);
    const std::vector<double> ks = brillouin_grid(cfg.numerics.nk);
    for (std::size_t j = 0; j < curve.size(); ++j) {
        csv.field(ks[j % ks.size()]).field(curve[j].first).field(curve[j].second);
        csv.end_row();
    }

    OutputSet outputs(cfg, "stability-grid");
    outputs.add(".csv", grid.str());
    outputs.add(".gamma.csv", gamma.str());
    return outputs.finish({{"cells", verdict_counts(cells)}});
}

CommandResult cmd_phase_diagram(const RunConfig& cfg)
{
    GridSpec spec{cfg.phase_diagram.axis1, cfg.phase_diagram.axis2, cfg.model};
    const FloquetOptions opts = cfg.numerics.options();
    const std::vector<PhaseCell> cells = phase_diagram(spec, cfg.numerics.nk, opts);
    const std::vector<EffectiveCell> overlay =
        effective_phase_overlay(spec, cfg.numerics.nk, std::nullopt, cfg.numerics.threads);

    std::ostringstream exact, eff;
    write_phase_csv(exact, cells);
    write_effective_csv(eff, overlay);

    std::map<int, int> ws_counts;
    for (const auto& c : cells)
        if (c.ws)
            ++ws_counts[*c.ws];
    json ws = json::object();
    for (const auto& [value, count] : ws_counts)
        ws[std::to_string(value)] = count;

    OutputSet outputs(cfg, "phase-diagram");
    outputs.add(".csv", exact.str());
    outputs.add(".effective.csv", eff.str());
    return outputs.finish({{"cells", verdict_counts(cells)},
                           {"ws_counts", ws},
                           {"effective_cells", verdict_counts(overlay)}});
}

CommandResult cmd_winding(const RunConfig& cfg)
{
    const WindingResult w = winding_undriven(cfg.model, cfg.numerics.nk);
    std::ostringstream os;
    CsvWriter csv(os, {"w", "raw", "residual", "min_field"});
    csv.field(w.w).field(w.raw).field(w.residual).field(w.min_field);
    csv.end_row();

    OutputSet outputs(cfg, "winding");
    outputs.add(".csv", os.str());
    return outputs.finish({{"w", w.w}, {"raw", w.raw}, {"residual", w.residual}, {"min_field", w.min_field}});
}

CommandResult cmd_ws(const RunConfig& cfg)
{
    const InvariantResult r = symplectic_winding(cfg.model, cfg.numerics.nk, cfg.numerics.options());
    std::ostringstream os;
    CsvWriter csv(os, {"ws", "raw", "residual", "bandset_size", "reference_component"});
    csv.field(r.ws).field(r.raw).field(r.residual).field(r.bandset_size).field(r.reference_component);
    csv.end_row();

    OutputSet outputs(cfg, "ws");
    outputs.add(".csv", os.str());
    return outputs.finish({{"ws", r.ws},
                           {"raw", r.raw},
                           {"residual", r.residual},
                           {"trusted", r.residual < 0.05},
                           {"bandset_size", r.bandset_size}});
}

CommandResult cmd_chain(const RunConfig& cfg)
{
    const FloquetOptions opts = cfg.numerics.options();
    const ChainSpectrum spec = chain_spectrum(cfg.model, cfg.chain.cells, opts);
    const double gap = bulk_gap_at_zero(cfg.model, cfg.numerics.nk, opts);
    const MidgapSet mid = detect_midgap(spec, cfg.chain.window_factor * gap, cfg.chain.edge_threshold);

    std::vector<bool> is_mid(spec.branches.size(), false);
    for (int i : mid.indices)
        is_mid[static_cast<std::size_t>(i)] = true;

    std::ostringstream os;
    CsvWriter csv(os, {"index", "re_eps", "im_eps", "cnorm", "edge_weight", "midgap"});
    double bulk_max_im = 0.0, mid_max_im = 0.0;
    for (std::size_t i = 0; i < spec.branches.size(); ++i) {
        const auto& br = spec.branches[i];
        csv.field(static_cast<int>(i)).field(br.eps.real()).field(br.eps.imag()).field(br.cnorm);
        csv.field(spec.edge_weights[i]).field(is_mid[i] ? 1 : 0);
        csv.end_row();
        double& target = is_mid[i] ? mid_max_im : bulk_max_im;
        target = std::max(target, std::abs(br.eps.imag()));
    }

    // Site densities |u_j|^2 + |v_j|^2 of the midgap states.
    std::ostringstream dens;
    std::vector<std::string> header{"site"};
    for (int i : mid.indices)
        header.push_back("state_" + std::to_string(i));
    CsvWriter dcsv(dens, header);
    const Eigen::Index n = 2 * cfg.chain.cells;
    for (Eigen::Index s = 0; s < n; ++s) {
        dcsv.field(static_cast<int>(s + 1));
        for (int i : mid.indices) {
            const Eigen::VectorXcd& v = spec.branches[static_cast<std::size_t>(i)].state;
            dcsv.field((std::norm(v(s)) + std::norm(v(s + n))) / v.squaredNorm());
        }
        dcsv.end_row();
    }

    OutputSet outputs(cfg, "chain");
    outputs.add(".csv", os.str());
    outputs.add(".midgap.csv", dens.str());
    return outputs.finish({{"bulk_gap", gap},
                           {"window", mid.window},
                           {"midgap_count", static_cast<int>(mid.indices.size())},
                           {"midgap_left", mid.left},
                           {"midgap_right", mid.right},
                           {"midgap_max_im", mid_max_im},
                           {"bulk_max_im", bulk_max_im},
                           {"sympl_residual", spec.sympl_residual},
                           {"defective", spec.defective}});
}

CommandResult cmd_evolve(const RunConfig& cfg)
{
    const EvolveConfig& e = cfg.evolve;
    const EvolutionTrace trace = evolve_vacuum(cfg.model, e.cells, e.t_max, e.samples, e.steps_per_period);
    std::ostringstream os;
    write_trace_csv(os, trace);

    // Growth of the first site over the second half of the run.
    const double t_end = trace.times.empty() ? 0.0 : trace.times.back();
    json rate = nullptr;
    try {
        rate = growth_rate_fit(trace, 0, FitWindow{0.5 * t_end, t_end});
    } catch (const NoExponentialRegime&) {
    }
    const double max_residual =
        trace.sympl_residual.empty() ? 0.0 : *std::max_element(trace.sympl_residual.begin(), trace.sympl_residual.end());

    OutputSet outputs(cfg, "evolve");
    outputs.add(".csv", os.str());
    return outputs.finish({{"samples", static_cast<int>(trace.times.size())},
                           {"t_end", t_end},
                           {"truncated", trace.truncated},
                           {"growth_rate_site1", rate},
                           {"max_sympl_residual", max_residual}});
}

CommandResult cmd_scan_path(const RunConfig& cfg)
{
    const std::vector<PathPoint> points =
        scan_path(cfg.model, cfg.path.end, cfg.path.points, cfg.numerics.nk, cfg.numerics.options());
    std::ostringstream os;
    CsvWriter csv(os, {"s", "nu0", "nu0p", "nu1", "nu1p", "g", "mu", "omega", "stable", "max_im", "ws",
                       "ws_residual", "error"});
    for (const auto& pt : points) {
        const ModelParams& q = pt.params;
        csv.field(pt.s).field(q.nu0).field(q.nu0p).field(q.nu1).field(q.nu1p).field(q.g).field(q.mu).field(q.omega);
        csv.field(pt.stable ? 1 : 0).field(pt.max_im).field(pt.ws);
        if (pt.ws_residual)
            csv.field(*pt.ws_residual);
        else
            csv.field(std::string_view{});
        csv.field(pt.error);
        csv.end_row();
    }
    json ends = json::array();
    for (const PathPoint* pt : {&points.front(), &points.back()})
        ends.push_back(pt->ws ? json(*pt->ws) : json(nullptr));

    OutputSet outputs(cfg, "scan-path");
    outputs.add(".csv", os.str());
    return outputs.finish({{"points", static_cast<int>(points.size())},
                           {"start", model_summary(cfg.model)},
                           {"end", model_summary(cfg.path.end)},
                           {"endpoint_ws", ends},
                           {"unstable_points", static_cast<int>(std::count_if(
                                                   points.begin(), points.end(),
                                                   [](const PathPoint& pt) { return !pt.stable; }))},
                           {"relation_violations", relation_violations(points)}});
}

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"spectrum", "stability-grid", "phase-diagram", "winding",
                                                "ws",       "chain",          "evolve",        "scan-path"};
    return names;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    static const std::map<std::string, std::function<CommandResult(const RunConfig&)>> table{
        {"spectrum", cmd_spectrum}, {"stability-grid", cmd_stability_grid},
        {"phase-diagram", cmd_phase_diagram}, {"winding", cmd_winding},
        {"ws", cmd_ws}, {"chain", cmd_chain},
        {"evolve", cmd_evolve}, {"scan-path", cmd_scan_path}};
    const auto it = table.find(name);
    if (it == table.end()) {
        err << "error: unknown command '" << name << "'\n";
        return kExitConfig;
    }
    try {
        const CommandResult r = it->second(cfg);
        out << r.summary.dump(2) << "\n";
        for (const auto& f : r.files)
            out << "wrote " << f << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvariantUndefined& e) {
        err << "invariant undefined: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace floqbog::cli
