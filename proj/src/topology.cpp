#include "floqbog/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "floqbog/errors.hpp"
#include "floqbog/parallel.hpp"

namespace floqbog {

namespace {

constexpr double pi = std::numbers::pi;

cplx metric_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b)
{
    const Eigen::Index half = a.size() / 2;
    return a.head(half).dot(b.head(half)) - a.tail(half).dot(b.tail(half));
}

} // namespace

WindingResult winding_undriven(const ModelParams& params, int nk)
{
    params.validate();
    const std::vector<double> ks = brillouin_grid(nk);
    auto field = [&](double k) {
        const FieldSample f = drive_fields(params, k, 0.0);
        return cplx(f.hx0, f.hy0);
    };
    WindingResult out;
    out.min_field = std::numeric_limits<double>::infinity();
    std::vector<cplx> h(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
        h[j] = field(ks[j]);
        if (std::abs(h[j]) < out.min_field)
            out.min_field = std::abs(h[j]);
        if (out.min_field < 1e-9)
            throw InvariantUndefined("winding undefined at degeneracy: h(k) = 0 near k = " + std::to_string(ks[j]));
    }
    double phase = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j)
        phase += std::arg(h[j] / h[j == 0 ? h.size() - 1 : j - 1]);
    out.raw = phase / (2.0 * pi);
    out.w = static_cast<int>(std::lround(out.raw));
    out.residual = std::abs(out.raw - out.w);
    if (out.residual > 1e-6)
        throw NumericalError("winding phase is not an integer multiple of 2 pi; refine the k-grid");
    return out;
}

std::vector<FloquetSpectrum> bloch_spectra(const ModelParams& params, const std::vector<double>& kgrid,
                                           const FloquetOptions& opts)
{
    params.validate();
    std::vector<FloquetSpectrum> spectra(kgrid.size());
    parallel_for(kgrid.size(), opts.threads, [&](std::size_t j) {
        spectra[j] = floquet_spectrum(bloch_monodromy(params, kgrid[j], opts), opts.tol);
    });
    return spectra;
}

TrackedBands track_spectra(const std::vector<double>& kgrid, const std::vector<FloquetSpectrum>& spectra,
                           double omega)
{
    if (kgrid.size() != spectra.size() || kgrid.size() < 2)
        throw std::invalid_argument("track_spectra needs one spectrum per grid point");
    const std::size_t nb = spectra.front().branches.size();
    for (const auto& s : spectra) {
        if (s.branches.size() != nb)
            throw TrackingError("branch count changes across the k-grid");
        for (const auto& b : s.branches)
            if (b.cnorm == 0)
                throw InvariantUndefined("band tracking needs normalizable states at every k");
    }

    // For each band, index of its branch in the spectrum at grid point j.
    auto match = [&](const std::vector<QuasienergyBranch>& from, const std::vector<QuasienergyBranch>& to,
                     double& min_overlap) {
        std::vector<std::size_t> perm(nb);
        std::vector<bool> taken(nb, false);
        for (std::size_t b = 0; b < nb; ++b) {
            double best = -1.0, second = -1.0;
            std::size_t arg = 0;
            for (std::size_t i = 0; i < nb; ++i) {
                const double o = std::abs(metric_overlap(from[b].state, to[i].state));
                if (o > best) {
                    second = best;
                    best = o;
                    arg = i;
                } else if (o > second) {
                    second = o;
                }
            }
            if (best - second < 1e-3)
                throw TrackingError("ambiguous band continuation; increase nk");
            if (best < 0.5)
                throw TrackingError("neighbouring states overlap below 0.5; increase nk");
            if (taken[arg])
                throw TrackingError("two bands continue into the same state; increase nk");
            taken[arg] = true;
            perm[b] = arg;
            min_overlap = std::min(min_overlap, best);
        }
        return perm;
    };

    TrackedBands out;
    out.kgrid = kgrid;
    out.omega = omega;
    out.min_overlap = 1e300;
    out.bands.assign(nb, {});
    std::vector<std::size_t> current(nb);
    for (std::size_t b = 0; b < nb; ++b)
        current[b] = b;
    for (std::size_t j = 0; j < kgrid.size(); ++j) {
        if (j > 0) {
            std::vector<QuasienergyBranch> prev(nb);
            for (std::size_t b = 0; b < nb; ++b)
                prev[b] = out.bands[b].back();
            current = match(prev, spectra[j].branches, out.min_overlap);
        }
        for (std::size_t b = 0; b < nb; ++b)
            out.bands[b].push_back(spectra[j].branches[current[b]]);
    }

    std::vector<QuasienergyBranch> last(nb), first(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        last[b] = out.bands[b].back();
        first[b] = out.bands[b].front();
    }
    const std::vector<std::size_t> closing = match(last, first, out.min_overlap);
    for (std::size_t b = 0; b < nb; ++b) {
        if (closing[b] != b)
            throw TrackingError("tracked bands do not close around the Brillouin zone");
        out.closure.push_back(std::abs(metric_overlap(last[b].state, first[b].state)));
    }
    return out;
}

TrackedBands track_bands(const ModelParams& params, int nk, const FloquetOptions& opts)
{
    const std::vector<double> ks = brillouin_grid(nk);
    return track_spectra(ks, bloch_spectra(params, ks, opts), params.omega);
}

std::vector<int> select_band_set(const TrackedBands& tracked)
{
    std::vector<int> set;
    for (std::size_t b = 0; b < tracked.bands.size(); ++b) {
        const auto& band = tracked.bands[b];
        const bool positive = std::all_of(band.begin(), band.end(), [&](const QuasienergyBranch& x) {
            return x.cnorm == 1 && x.eps.real() > 0.0 && x.eps.real() < 0.5 * tracked.omega;
        });
        if (positive)
            set.push_back(static_cast<int>(b));
    }
    return set;
}

InvariantResult band_set_winding(const TrackedBands& tracked, const std::vector<int>& band_set)
{
    InvariantResult out;
    out.bandset_size = static_cast<int>(band_set.size());
    if (band_set.empty())
        return out;
    const std::size_t nk = tracked.kgrid.size();
    const Eigen::Index dim = tracked.bands.front().front().state.size();

    // Particle amplitude on the first sublattice, else the hole amplitude there.
    const Eigen::Index candidates[] = {0, dim / 2};
    Eigen::Index reference = -1;
    for (Eigen::Index c : candidates) {
        bool usable = true;
        for (int b : band_set)
            for (const auto& x : tracked.bands[static_cast<std::size_t>(b)])
                if (std::abs(x.state(c)) < 1e-6)
                    usable = false;
        if (usable) {
            reference = c;
            break;
        }
    }
    if (reference < 0)
        throw NumericalError("gauge reference amplitude vanishes on the band set; W^S ill-conditioned");
    out.reference_component = static_cast<int>(reference);

    double phase = 0.0;
    for (int b : band_set) {
        const auto& band = tracked.bands[static_cast<std::size_t>(b)];
        for (std::size_t j = 0; j < nk; ++j) {
            const Eigen::VectorXcd& a = band[j].state;
            const Eigen::VectorXcd& c = band[(j + 1) % nk].state;
            const cplx link = metric_overlap(a, c) * a(reference) * std::conj(c(reference));
            const double step = std::arg(link);
            if (std::abs(step) > 0.5 * pi)
                throw TrackingError("Berry phase increment exceeds pi/2 between neighbouring k; increase nk");
            phase += step;
        }
    }
    out.raw = phase / pi;
    out.ws = static_cast<int>(std::lround(out.raw));
    out.residual = std::abs(out.raw - out.ws);
    return out;
}

InvariantResult symplectic_winding(const ModelParams& params, int nk, const FloquetOptions& opts)
{
    const std::vector<double> ks = brillouin_grid(nk);
    const std::vector<FloquetSpectrum> spectra = bloch_spectra(params, ks, opts);
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const Stability s = classify_stability(spectra[j].branches, params.omega, opts.tol);
        if (s == Stability::Unstable)
            throw InvariantUndefined("W^S is only defined for globally strongly stable systems; not globally stable, unstable at k = " +
                                     std::to_string(ks[j]));
        if (s == Stability::MarginallyStable)
            throw InvariantUndefined("W^S is only defined for globally strongly stable systems; not globally strongly stable, resonance at k = " +
                                     std::to_string(ks[j]));
    }
    const TrackedBands tracked = track_spectra(ks, spectra, params.omega);
    return band_set_winding(tracked, select_band_set(tracked));
}

std::vector<PathPoint> scan_path(const ModelParams& start, const ModelParams& end, int n_points, int nk,
                                 const FloquetOptions& opts)
{
    if (n_points < 16)
        throw std::invalid_argument("scan_path needs at least 16 points");
    start.validate();
    end.validate();
    const std::vector<double> ks = brillouin_grid(nk);
    std::vector<PathPoint> points(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        PathPoint& p = points[static_cast<std::size_t>(i)];
        p.s = static_cast<double>(i) / (n_points - 1);
        p.params = lerp(start, end, p.s);
        try {
            const std::vector<FloquetSpectrum> spectra = bloch_spectra(p.params, ks, opts);
            bool strongly = true;
            p.stable = true;
            for (const auto& s : spectra) {
                for (const auto& b : s.branches)
                    p.max_im = std::max(p.max_im, std::abs(b.eps.imag()));
                const Stability v = classify_stability(s.branches, p.params.omega, opts.tol);
                p.stable = p.stable && v != Stability::Unstable;
                strongly = strongly && v == Stability::StronglyStable;
            }
            if (strongly) {
                const TrackedBands tracked = track_spectra(ks, spectra, p.params.omega);
                const InvariantResult r = band_set_winding(tracked, select_band_set(tracked));
                p.ws = r.ws;
                p.ws_residual = r.residual;
            }
        } catch (const std::exception& e) {
            p.error = e.what();
        }
    }
    return points;
}

int relation_violations(const std::vector<PathPoint>& points)
{
    int violations = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].ws)
            continue;
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (!points[j].ws || *points[j].ws == *points[i].ws)
                continue;
            const bool separated = std::any_of(points.begin() + static_cast<long>(i) + 1,
                                               points.begin() + static_cast<long>(j),
                                               [](const PathPoint& p) { return !p.stable; });
            if (!separated)
                ++violations;
        }
    }
    return violations;
}

} // namespace floqbog
