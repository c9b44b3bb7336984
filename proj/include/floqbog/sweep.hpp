#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floqbog/effective.hpp"
#include "floqbog/floquet.hpp"
#include "floqbog/model.hpp"

namespace floqbog {

enum class ParamId { nu0, nu0p, nu1, nu1p, g, mu, omega };

ParamId parse_param(const std::string& name);
const char* param_name(ParamId id);
double& param_ref(ModelParams& params, ParamId id);

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    void validate() const;
    double value(int i) const;
};

/// Drive-amplitude plane at a fixed k-independent static field.
struct StabilityGridSpec {
    double hx0 = 0.0;
    double hy0 = 0.0;
    double mu = 0.0;
    double g = 1.0;
    double omega = 1.0;
    Axis hx1{"hx1", -1.0, 1.0, 2};
    Axis hy1{"hy1", -1.0, 1.0, 2};
};

/// Two model parameters as axes, everything else fixed.
struct GridSpec {
    Axis axis1;
    Axis axis2;
    ModelParams fixed;

    ModelParams at(int i, int j) const;
};

enum class Verdict { Stable, Unstable, Failed };

const char* to_string(Verdict v);

struct StabilityCell {
    double x = 0.0;
    double y = 0.0;
    Verdict verdict = Verdict::Failed;
    double max_im = 0.0;
    std::string error;
};

struct PhaseCell {
    double x = 0.0;
    double y = 0.0;
    Verdict verdict = Verdict::Failed;
    double max_im = 0.0;
    std::optional<int> ws; ///< present only for globally strongly stable cells
    double ws_residual = 0.0;
    std::string error;
};

struct EffectiveCell {
    double x = 0.0;
    double y = 0.0;
    Verdict verdict = Verdict::Failed;
    double max_im = 0.0;
    EffectiveIndices indices;
};

/// Cells are stored row-major with the first axis running fastest: index = j * count1 + i.
std::vector<StabilityCell> stability_grid(const StabilityGridSpec& spec, const FloquetOptions& opts = {});

/// Stability of a single (hx1, hy1) point of the drive-amplitude plane.
StabilityCell stability_cell(const StabilityGridSpec& spec, double hx1, double hy1, const FloquetOptions& opts);

/// k -> (hx1(k), hy1(k)) on the uniform grid, closed by repeating the first point.
std::vector<std::pair<double, double>> curve_gamma(const ModelParams& params, int nk);

std::vector<PhaseCell> phase_diagram(const GridSpec& spec, int nk, const FloquetOptions& opts = {});

PhaseCell phase_cell(const ModelParams& params, int nk, const FloquetOptions& opts);

/// Effective-Hamiltonian verdicts; indices chosen per cell unless given.
std::vector<EffectiveCell> effective_phase_overlay(const GridSpec& spec, int nk,
                                                   std::optional<EffectiveIndices> indices = std::nullopt,
                                                   int threads = 1);

/// Largest distance between a stability boundary of one 1-D cut and the
/// nearest boundary of the other (symmetric). Boundaries sit midway between
/// neighbouring cells with different verdicts. Returns 0 when neither cut has a
/// boundary and +inf when only one does.
double boundary_displacement(const std::vector<double>& coords, const std::vector<Verdict>& exact,
                             const std::vector<Verdict>& effective);

void write_stability_csv(std::ostream& out, const std::vector<StabilityCell>& cells);
void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);
void write_effective_csv(std::ostream& out, const std::vector<EffectiveCell>& cells);

} // namespace floqbog
