#include "floqbog/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "floqbog/csv.hpp"
#include "floqbog/propagator.hpp"
#include "floqbog/topology.hpp"

namespace floqbog {

ChainGenerator::ChainGenerator(const ModelParams& params, int cells)
    : m_params(params)
    , m_cells(cells)
{
    params.validate();
    if (cells < 2)
        throw std::invalid_argument("chain needs at least 2 unit cells, got " + std::to_string(cells));
}

void ChainGenerator::operator()(double t, const Eigen::MatrixXcd& u, Eigen::MatrixXcd& du) const
{
    const Eigen::Index n = sites();
    const double intra = -m_params.intra_hopping(t);
    const double inter = -m_params.inter_hopping(t);
    const double mu = m_params.mu;
    const double g = m_params.g;
    const cplx minus_i(0.0, -1.0);
    du.resize(u.rows(), u.cols());
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        const cplx* x = u.col(c).data();
        cplx* y = du.col(c).data();
        for (Eigen::Index i = 0; i < n; ++i) {
            // Hopping partners: site 2m pairs with 2m+1 (intra) and 2m-1 (inter).
            cplx kp = -mu * x[i];
            cplx kh = -mu * x[i + n];
            if (i % 2 == 0) {
                kp += intra * x[i + 1];
                kh += intra * x[i + 1 + n];
                if (i > 0) {
                    kp += inter * x[i - 1];
                    kh += inter * x[i - 1 + n];
                }
            } else {
                kp += intra * x[i - 1];
                kh += intra * x[i - 1 + n];
                if (i + 1 < n) {
                    kp += inter * x[i + 1];
                    kh += inter * x[i + 1 + n];
                }
            }
            y[i] = minus_i * (kp + g * x[i + n]);
            y[i + n] = -minus_i * (g * x[i] + kh);
        }
    }
}

Monodromy chain_monodromy(const ModelParams& params, int cells, const FloquetOptions& opts)
{
    const ChainGenerator gen(params, cells);
    const Eigen::Index dim = 2 * gen.sites();
    int steps = opts.steps;
    for (int attempt = 0;; ++attempt, steps *= 2) {
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
        rk4_integrate(gen, u, 0.0, params.period() / steps, steps);
        if (!u.allFinite())
            throw NumericalError("chain monodromy produced non-finite entries with " + std::to_string(steps) +
                                 " steps per period; increase steps_per_period");
        Monodromy m{std::move(u), params.omega, steps, 0.0};
        m.sympl_residual = pseudo_unitarity_residual(m.U);
        if (m.sympl_residual <= opts.tol.tol_sympl || attempt >= opts.max_doublings)
            return m;
    }
}

double edge_weight(const Eigen::VectorXcd& state, double fraction)
{
    if (!(fraction > 0.0 && fraction <= 0.5))
        throw std::invalid_argument("edge fraction must lie in (0, 0.5]");
    const Eigen::Index n = state.size() / 2;
    const auto outer = static_cast<Eigen::Index>(std::ceil(fraction * static_cast<double>(n) - 1e-12));
    double total = 0.0, edge = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double w = std::norm(state(j)) + std::norm(state(j + n));
        total += w;
        if (j < outer || j >= n - outer)
            edge += w;
    }
    return total > 0.0 ? edge / total : 0.0;
}

ChainSpectrum chain_spectrum(const ModelParams& params, int cells, const FloquetOptions& opts)
{
    const Monodromy m = chain_monodromy(params, cells, opts);
    FloquetSpectrum s = floquet_spectrum(m, opts.tol);
    ChainSpectrum out;
    out.cells = cells;
    out.omega = params.omega;
    out.sympl_residual = m.sympl_residual;
    out.defective = s.defective;
    out.branches = std::move(s.branches);
    for (const auto& b : out.branches)
        out.edge_weights.push_back(edge_weight(b.state));
    return out;
}

double bulk_gap_at_zero(const ModelParams& params, int nk, const FloquetOptions& opts)
{
    const std::vector<FloquetSpectrum> spectra = bloch_spectra(params, brillouin_grid(nk), opts);
    double gap = params.omega;
    for (const auto& s : spectra)
        for (const auto& b : s.branches)
            gap = std::min(gap, std::abs(b.eps.real()));
    return 2.0 * gap;
}

MidgapSet detect_midgap(const ChainSpectrum& spectrum, double window, double edge_threshold)
{
    MidgapSet out;
    out.window = window;
    for (std::size_t i = 0; i < spectrum.branches.size(); ++i)
        if (std::abs(spectrum.branches[i].eps.real()) < window && spectrum.edge_weights[i] > edge_threshold)
            out.indices.push_back(static_cast<int>(i));
    if (out.indices.empty())
        return out;

    const Eigen::Index dim = spectrum.branches.front().state.size();
    const Eigen::Index n = dim / 2;
    const auto m = static_cast<Eigen::Index>(out.indices.size());
    Eigen::MatrixXcd basis(dim, m);
    for (Eigen::Index c = 0; c < m; ++c)
        basis.col(c) = spectrum.branches[static_cast<std::size_t>(out.indices[static_cast<std::size_t>(c)])].state.normalized();
    // Orthonormal basis of the midgap subspace, then the left-half projector inside it.
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, m);
    Eigen::VectorXd left(dim);
    for (Eigen::Index j = 0; j < n; ++j)
        left(j) = left(j + n) = j < n / 2 ? 1.0 : 0.0;
    const Eigen::MatrixXcd projected = q.adjoint() * left.asDiagonal() * q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(projected);
    for (Eigen::Index c = 0; c < m; ++c)
        (solver.eigenvalues()(c) > 0.5 ? out.left : out.right) += 1;
    return out;
}

EvolutionTrace evolve_vacuum(const ModelParams& params, int cells, double t_max_periods, int n_samples,
                             int steps_per_period)
{
    if (n_samples < 2)
        throw std::invalid_argument("evolve_vacuum needs at least 2 samples");
    if (!(t_max_periods > 0.0))
        throw std::invalid_argument("t_max must be positive");
    if (steps_per_period < 1)
        throw std::invalid_argument("steps_per_period must be positive");
    const ChainGenerator gen(params, cells);
    const Eigen::Index n = gen.sites();
    const double interval = t_max_periods * params.period() / (n_samples - 1);
    const long sub_steps =
        std::max<long>(1, static_cast<long>(std::ceil(interval / (params.period() / steps_per_period) - 1e-9)));
    const double dt = interval / static_cast<double>(sub_steps);

    EvolutionTrace trace;
    trace.cells = cells;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
    for (int s = 0; s < n_samples; ++s) {
        const double t = s * interval;
        if (s > 0)
            rk4_integrate(gen, u, (s - 1) * interval, dt, sub_steps);
        if (!u.allFinite())
            throw NumericalError("vacuum evolution produced non-finite entries; increase steps_per_period");
        const Eigen::MatrixXcd a = u.topLeftCorner(n, n);
        const Eigen::MatrixXcd b = u.topRightCorner(n, n);
        std::vector<double> occ(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j)
            occ[static_cast<std::size_t>(j)] = b.row(j).squaredNorm();
        Eigen::MatrixXcd block = a * a.adjoint() - b * b.adjoint();
        block.diagonal().array() -= 1.0;
        const Eigen::MatrixXcd abt = a * b.transpose();
        const double residual =
            std::max(block.cwiseAbs().maxCoeff(), (abt - abt.transpose()).cwiseAbs().maxCoeff());
        trace.times.push_back(t);
        trace.occupations.push_back(std::move(occ));
        trace.sympl_residual.push_back(residual);
        const auto& last = trace.occupations.back();
        if (*std::max_element(last.begin(), last.end()) > 1e12) {
            trace.truncated = true;
            break;
        }
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const EvolutionTrace& trace)
{
    const std::size_t n = trace.occupations.empty() ? 0 : trace.occupations.front().size();
    std::vector<std::string> header{"t"};
    for (std::size_t j = 0; j < n; ++j)
        header.push_back("n_" + std::to_string(j + 1));
    header.emplace_back("sympl_residual");
    CsvWriter csv(out, header);
    for (std::size_t s = 0; s < trace.times.size(); ++s) {
        csv.field(trace.times[s]);
        for (double v : trace.occupations[s])
            csv.field(v);
        csv.field(trace.sympl_residual[s]);
        csv.end_row();
    }
}

double growth_rate_fit(const EvolutionTrace& trace, int site, FitWindow window)
{
    if (site < 0 || trace.occupations.empty() ||
        static_cast<std::size_t>(site) >= trace.occupations.front().size())
        throw std::invalid_argument("site index out of range");
    std::vector<double> ts, ys;
    for (std::size_t s = 0; s < trace.times.size(); ++s) {
        const double t = trace.times[s];
        const double v = trace.occupations[s][static_cast<std::size_t>(site)];
        if (t >= window.t_begin && t <= window.t_end && v > 1e-6) {
            ts.push_back(t);
            ys.push_back(std::log(v));
        }
    }
    if (ts.size() < 8)
        throw NoExponentialRegime("no exponential regime detected at site " + std::to_string(site + 1));
    const auto count = static_cast<double>(ts.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        my += ys[i];
    }
    mt /= count;
    my /= count;
    double sty = 0.0, stt = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sty += (ts[i] - mt) * (ys[i] - my);
        stt += (ts[i] - mt) * (ts[i] - mt);
    }
    if (stt == 0.0)
        throw NoExponentialRegime("fit window contains a single time");
    const double slope = sty / stt;
    if (!(slope > 0.0))
        throw NoExponentialRegime("no exponential regime detected at site " + std::to_string(site + 1));
    return slope;
}

std::vector<NudgeCandidate> nudge_search(const ModelParams& base, int cells, double radius, int trials,
                                         std::uint64_t seed, const FloquetOptions& opts)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-radius, radius);
    std::vector<NudgeCandidate> out;
    for (int i = 0; i < trials; ++i) {
        ModelParams p = base;
        if (i > 0) {
            p.nu0 += offset(rng);
            p.nu1 += offset(rng);
            p.nu1p += offset(rng);
            p.mu += offset(rng);
        }
        NudgeCandidate c{p, 0, 0.0};
        try {
            const ChainSpectrum s = chain_spectrum(p, cells, opts);
            const double gap = bulk_gap_at_zero(p, 64, opts);
            const MidgapSet mid = detect_midgap(s, 0.1 * gap);
            std::vector<bool> is_mid(s.branches.size(), false);
            for (int idx : mid.indices)
                is_mid[static_cast<std::size_t>(idx)] = true;
            for (std::size_t b = 0; b < s.branches.size(); ++b) {
                const double im = s.branches[b].eps.imag();
                if (is_mid[b])
                    c.unstable_midgap += im > opts.tol.tol_im ? 1 : 0;
                else
                    c.bulk_max_im = std::max(c.bulk_max_im, std::abs(im));
            }
        } catch (const NumericalError&) {
            continue;
        }
        out.push_back(c);
    }
    std::stable_sort(out.begin(), out.end(), [](const NudgeCandidate& a, const NudgeCandidate& b) {
        if (a.unstable_midgap != b.unstable_midgap)
            return a.unstable_midgap > b.unstable_midgap;
        return a.bulk_max_im < b.bulk_max_im;
    });
    return out;
}

} // namespace floqbog
