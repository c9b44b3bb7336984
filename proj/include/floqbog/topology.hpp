#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floqbog/floquet.hpp"
#include "floqbog/model.hpp"

namespace floqbog {

struct WindingResult {
    int w = 0;
    double raw = 0.0;       ///< accumulated phase / 2 pi
    double residual = 0.0;  ///< |raw - w|
    double min_field = 0.0; ///< min over k of |h(k)|
};

/// Winding of hx0(k) + i hy0(k) around the origin; throws InvariantUndefined at a gap closing.
WindingResult winding_undriven(const ModelParams& params, int nk);

/// Floquet spectra of the Bloch problem on a k-grid.
std::vector<FloquetSpectrum> bloch_spectra(const ModelParams& params, const std::vector<double>& kgrid,
                                           const FloquetOptions& opts);

struct TrackedBands {
    std::vector<double> kgrid;
    double omega = 1.0;
    /// bands[b][j] is band b at kgrid[j]
    std::vector<std::vector<QuasienergyBranch>> bands;
    /// |<psi_b(k_last)|Sz|psi_b(k_first)>| per band
    std::vector<double> closure;
    /// smallest accepted neighbour overlap over the whole grid
    double min_overlap = 0.0;
};

/// Continues every branch from k_j to k_{j+1} by the largest |Sz-overlap|.
/// Requires all branches to be normalizable. Throws TrackingError when two
/// candidate overlaps are within 1e-3 or the loop does not close.
TrackedBands track_spectra(const std::vector<double>& kgrid, const std::vector<FloquetSpectrum>& spectra,
                           double omega);

TrackedBands track_bands(const ModelParams& params, int nk, const FloquetOptions& opts = {});

/// Bands with 0 < Re eps < omega/2 and cnorm = +1 at every k.
std::vector<int> select_band_set(const TrackedBands& tracked);

struct InvariantResult {
    int ws = 0;
    double raw = 0.0;
    double residual = 0.0;
    int bandset_size = 0;
    int reference_component = 0; ///< Nambu component used to fix the gauge
};

/// Sum over the band set of the Sz-weighted Berry phase divided by pi.
///
/// Each band is evaluated in the gauge where the chosen reference component
/// (particle amplitude on the first sublattice, falling back to the hole
/// amplitude) is real and positive. Every link factor
/// <psi_j|Sz|psi_{j+1}> psi_j[c] conj(psi_{j+1}[c]) is invariant under a
/// per-k phase change, so the result does not depend on the eigensolver gauge.
InvariantResult band_set_winding(const TrackedBands& tracked, const std::vector<int>& band_set);

/// W^S; throws InvariantUndefined unless the system is globally strongly stable.
InvariantResult symplectic_winding(const ModelParams& params, int nk, const FloquetOptions& opts = {});

struct PathPoint {
    double s = 0.0;
    ModelParams params;
    bool stable = false;
    double max_im = 0.0;
    std::optional<int> ws;
    std::optional<double> ws_residual;
    std::string error;
};

/// Linear interpolation start -> end, n_points >= 16 points including both ends.
std::vector<PathPoint> scan_path(const ModelParams& start, const ModelParams& end, int n_points, int nk,
                                 const FloquetOptions& opts = {});

/// Number of pairs of stable points with different W^S and no unstable point between them.
int relation_violations(const std::vector<PathPoint>& points);

} // namespace floqbog
