#include "floqbog/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "floqbog/csv.hpp"
#include "floqbog/parallel.hpp"
#include "floqbog/topology.hpp"

namespace floqbog {

namespace {

constexpr std::pair<ParamId, const char*> param_names[] = {
    {ParamId::nu0, "nu0"}, {ParamId::nu0p, "nu0p"}, {ParamId::nu1, "nu1"},    {ParamId::nu1p, "nu1p"},
    {ParamId::g, "g"},     {ParamId::mu, "mu"},     {ParamId::omega, "omega"},
};

FloquetOptions single_threaded(FloquetOptions opts)
{
    opts.threads = 1;
    return opts;
}

} // namespace

ParamId parse_param(const std::string& name)
{
    for (const auto& [id, n] : param_names)
        if (name == n)
            return id;
    throw std::invalid_argument("unknown model parameter '" + name + "'");
}

const char* param_name(ParamId id)
{
    for (const auto& [i, n] : param_names)
        if (i == id)
            return n;
    return "?";
}

double& param_ref(ModelParams& p, ParamId id)
{
    switch (id) {
    case ParamId::nu0:
        return p.nu0;
    case ParamId::nu0p:
        return p.nu0p;
    case ParamId::nu1:
        return p.nu1;
    case ParamId::nu1p:
        return p.nu1p;
    case ParamId::g:
        return p.g;
    case ParamId::mu:
        return p.mu;
    case ParamId::omega:
        return p.omega;
    }
    throw std::invalid_argument("bad parameter id");
}

void Axis::validate() const
{
    if (count < 2)
        throw std::invalid_argument("axis '" + name + "' needs at least 2 points");
    if (!(min < max))
        throw std::invalid_argument("axis '" + name + "' needs min < max");
}

double Axis::value(int i) const
{
    return min + (max - min) * static_cast<double>(i) / (count - 1);
}

ModelParams GridSpec::at(int i, int j) const
{
    ModelParams p = fixed;
    param_ref(p, parse_param(axis1.name)) = axis1.value(i);
    param_ref(p, parse_param(axis2.name)) = axis2.value(j);
    return p;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Stable:
        return "stable";
    case Verdict::Unstable:
        return "unstable";
    case Verdict::Failed:
        return "failed";
    }
    return "unknown";
}

StabilityCell stability_cell(const StabilityGridSpec& spec, double hx1, double hy1, const FloquetOptions& opts)
{
    StabilityCell cell;
    cell.x = hx1;
    cell.y = hy1;
    try {
        FieldSample f;
        f.hx0 = spec.hx0;
        f.hy0 = spec.hy0;
        f.hx1 = hx1;
        f.hy1 = hy1;
        const FloquetSpectrum s = floquet_spectrum(field_monodromy(f, spec.mu, spec.g, spec.omega, opts), opts.tol);
        for (const auto& b : s.branches)
            cell.max_im = std::max(cell.max_im, std::abs(b.eps.imag()));
        cell.verdict = cell.max_im > opts.tol.tol_im ? Verdict::Unstable : Verdict::Stable;
    } catch (const std::exception& e) {
        cell.verdict = Verdict::Failed;
        cell.error = e.what();
    }
    return cell;
}

std::vector<StabilityCell> stability_grid(const StabilityGridSpec& spec, const FloquetOptions& opts)
{
    spec.hx1.validate();
    spec.hy1.validate();
    if (!(spec.omega > 0.0))
        throw std::invalid_argument("omega must be positive");
    const int nx = spec.hx1.count;
    const int ny = spec.hy1.count;
    std::vector<StabilityCell> cells(static_cast<std::size_t>(nx) * ny);
    const FloquetOptions inner = single_threaded(opts);
    parallel_for(cells.size(), opts.threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % nx);
        const int j = static_cast<int>(idx / nx);
        cells[idx] = stability_cell(spec, spec.hx1.value(i), spec.hy1.value(j), inner);
    });
    return cells;
}

std::vector<std::pair<double, double>> curve_gamma(const ModelParams& params, int nk)
{
    std::vector<std::pair<double, double>> out;
    for (double k : brillouin_grid(nk)) {
        const FieldSample f = drive_fields(params, k, 0.0);
        out.emplace_back(f.hx1, f.hy1);
    }
    out.push_back(out.front());
    return out;
}

PhaseCell phase_cell(const ModelParams& params, int nk, const FloquetOptions& opts)
{
    PhaseCell cell;
    try {
        params.validate();
        const std::vector<double> ks = brillouin_grid(nk);
        const std::vector<FloquetSpectrum> spectra = bloch_spectra(params, ks, opts);
        bool strongly = true;
        for (const auto& s : spectra) {
            for (const auto& b : s.branches)
                cell.max_im = std::max(cell.max_im, std::abs(b.eps.imag()));
            strongly = strongly && classify_stability(s.branches, params.omega, opts.tol) == Stability::StronglyStable;
        }
        cell.verdict = cell.max_im > opts.tol.tol_im ? Verdict::Unstable : Verdict::Stable;
        if (strongly) {
            const TrackedBands tracked = track_spectra(ks, spectra, params.omega);
            const InvariantResult r = band_set_winding(tracked, select_band_set(tracked));
            cell.ws = r.ws;
            cell.ws_residual = r.residual;
        }
    } catch (const std::exception& e) {
        cell.verdict = Verdict::Failed;
        cell.ws.reset();
        cell.error = e.what();
    }
    return cell;
}

std::vector<PhaseCell> phase_diagram(const GridSpec& spec, int nk, const FloquetOptions& opts)
{
    spec.axis1.validate();
    spec.axis2.validate();
    parse_param(spec.axis1.name);
    parse_param(spec.axis2.name);
    const int nx = spec.axis1.count;
    const int ny = spec.axis2.count;
    std::vector<PhaseCell> cells(static_cast<std::size_t>(nx) * ny);
    const FloquetOptions inner = single_threaded(opts);
    parallel_for(cells.size(), opts.threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % nx);
        const int j = static_cast<int>(idx / nx);
        PhaseCell c = phase_cell(spec.at(i, j), nk, inner);
        c.x = spec.axis1.value(i);
        c.y = spec.axis2.value(j);
        cells[idx] = std::move(c);
    });
    return cells;
}

std::vector<EffectiveCell> effective_phase_overlay(const GridSpec& spec, int nk,
                                                   std::optional<EffectiveIndices> indices, int threads)
{
    spec.axis1.validate();
    spec.axis2.validate();
    const int nx = spec.axis1.count;
    const int ny = spec.axis2.count;
    std::vector<EffectiveCell> cells(static_cast<std::size_t>(nx) * ny);
    parallel_for(cells.size(), threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % nx);
        const int j = static_cast<int>(idx / nx);
        EffectiveCell& c = cells[idx];
        c.x = spec.axis1.value(i);
        c.y = spec.axis2.value(j);
        try {
            const EffectiveSpectrum s = effective_spectrum(spec.at(i, j), nk, indices);
            c.indices = s.indices;
            c.max_im = s.max_im;
            c.verdict = s.stable ? Verdict::Stable : Verdict::Unstable;
        } catch (const std::exception&) {
            c.verdict = Verdict::Failed;
        }
    });
    return cells;
}

double boundary_displacement(const std::vector<double>& coords, const std::vector<Verdict>& exact,
                             const std::vector<Verdict>& effective)
{
    if (coords.size() != exact.size() || coords.size() != effective.size())
        throw std::invalid_argument("boundary_displacement needs equally long cuts");
    auto boundaries = [&](const std::vector<Verdict>& v) {
        std::vector<double> b;
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            if ((v[i] == Verdict::Unstable) != (v[i + 1] == Verdict::Unstable))
                b.push_back(0.5 * (coords[i] + coords[i + 1]));
        return b;
    };
    const std::vector<double> a = boundaries(exact);
    const std::vector<double> b = boundaries(effective);
    if (a.empty() && b.empty())
        return 0.0;
    if (a.empty() || b.empty())
        return std::numeric_limits<double>::infinity();
    auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        for (double x : from) {
            double best = std::numeric_limits<double>::infinity();
            for (double y : to)
                best = std::min(best, std::abs(x - y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

void write_stability_csv(std::ostream& out, const std::vector<StabilityCell>& cells)
{
    CsvWriter csv(out, {"x", "y", "verdict", "max_im"});
    for (const auto& c : cells) {
        csv.field(c.x).field(c.y).field(to_string(c.verdict)).field(c.max_im);
        csv.end_row();
    }
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells)
{
    CsvWriter csv(out, {"x", "y", "verdict", "max_im", "ws"});
    for (const auto& c : cells) {
        csv.field(c.x).field(c.y).field(to_string(c.verdict)).field(c.max_im).field(c.ws);
        csv.end_row();
    }
}

void write_effective_csv(std::ostream& out, const std::vector<EffectiveCell>& cells)
{
    CsvWriter csv(out, {"x", "y", "verdict", "max_im", "alpha", "beta"});
    for (const auto& c : cells) {
        csv.field(c.x).field(c.y).field(to_string(c.verdict)).field(c.max_im).field(c.indices.alpha).field(
            c.indices.beta);
        csv.end_row();
    }
}

} // namespace floqbog
