#include "floqbog/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "floqbog/errors.hpp"
#include "floqbog/parallel.hpp"
#include "floqbog/propagator.hpp"

namespace floqbog {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

template <class Matrix>
void require_finite(const Matrix& u, int steps)
{
    if (!u.allFinite())
        throw NumericalError("monodromy integration produced non-finite entries with " +
                             std::to_string(steps) + " steps per period; increase steps_per_period");
}

Eigen::Matrix4cd integrate_periodic4(const Eigen::Matrix4cd& d0, const Eigen::Matrix4cd& d1, double omega,
                                     int steps)
{
    const cplx minus_i(0.0, -1.0);
    const Eigen::Matrix4cd a0 = minus_i * d0;
    const Eigen::Matrix4cd a1 = minus_i * d1;
    auto deriv = [&](double t, const Eigen::Matrix4cd& u, Eigen::Matrix4cd& du) {
        du.noalias() = (a0 + std::cos(omega * t) * a1) * u;
    };
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    rk4_integrate(deriv, u, 0.0, two_pi / omega / steps, steps);
    return u;
}

// Union-find style grouping of eigenvalues closer than tol.
std::vector<int> cluster_labels(const Eigen::VectorXcd& lambda, double tol)
{
    const auto n = static_cast<int>(lambda.size());
    std::vector<int> label(n);
    std::iota(label.begin(), label.end(), 0);
    auto root = [&](int i) {
        while (label[i] != i)
            i = label[i] = label[label[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(lambda(i) - lambda(j)) < tol)
                label[root(j)] = root(i);
    for (int i = 0; i < n; ++i)
        label[i] = root(i);
    return label;
}

double circular_distance(double a, double b, double period)
{
    const double r = std::fmod(std::abs(a - b), period);
    return std::min(r, period - r);
}

} // namespace

const char* to_string(Stability s)
{
    switch (s) {
    case Stability::StronglyStable:
        return "strongly_stable";
    case Stability::MarginallyStable:
        return "marginally_stable";
    case Stability::Unstable:
        return "unstable";
    }
    return "unknown";
}

double pseudo_unitarity_residual(const Eigen::MatrixXcd& u)
{
    const Eigen::VectorXd s = nambu_signature(u.rows());
    const Eigen::MatrixXcd g = u.adjoint() * s.asDiagonal() * u;
    Eigen::MatrixXcd diff = g;
    diff.diagonal() -= s.cast<cplx>();
    return diff.cwiseAbs().maxCoeff();
}

Monodromy monodromy(const Generator& generator, double omega, int steps)
{
    if (!(omega > 0.0))
        throw std::invalid_argument("omega must be positive");
    if (steps < 1)
        throw std::invalid_argument("steps must be positive");
    const Eigen::Index dim = generator(0.0).dim();
    const cplx minus_i(0.0, -1.0);
    auto deriv = [&](double t, const Eigen::MatrixXcd& u, Eigen::MatrixXcd& du) {
        du.noalias() = minus_i * generator(t).dynamical_matrix() * u;
    };
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    rk4_integrate(deriv, u, 0.0, two_pi / omega / steps, steps);
    require_finite(u, steps);
    Monodromy m{std::move(u), omega, steps, 0.0};
    m.sympl_residual = pseudo_unitarity_residual(m.U);
    return m;
}

Monodromy periodic_monodromy(const BdGMatrix& static_part, const BdGMatrix& drive_part, double omega,
                             const FloquetOptions& opts)
{
    if (static_part.dim() != 4 || drive_part.dim() != 4)
        throw std::invalid_argument("periodic_monodromy expects 4x4 matrices");
    if (opts.steps < 1)
        throw std::invalid_argument("steps must be positive");
    const Eigen::Matrix4cd d0 = static_part.dynamical_matrix();
    const Eigen::Matrix4cd d1 = drive_part.dynamical_matrix();
    int steps = opts.steps;
    for (int attempt = 0;; ++attempt, steps *= 2) {
        Eigen::Matrix4cd u = integrate_periodic4(d0, d1, omega, steps);
        require_finite(u, steps);
        Monodromy m{Eigen::MatrixXcd(u), omega, steps, 0.0};
        m.sympl_residual = pseudo_unitarity_residual(m.U);
        if (m.sympl_residual <= opts.tol.tol_sympl || attempt >= opts.max_doublings)
            return m;
    }
}

Monodromy bloch_monodromy(const ModelParams& params, double k, const FloquetOptions& opts)
{
    return field_monodromy(drive_fields(params, k, 0.0), params.mu, params.g, params.omega, opts);
}

Monodromy field_monodromy(const FieldSample& fields, double mu, double g, double omega,
                          const FloquetOptions& opts)
{
    const BdGMatrix h0 = field_hamiltonian(fields.hx0, fields.hy0, mu, g);
    const BdGMatrix h1 = field_hamiltonian(fields.hx1, fields.hy1, 0.0, 0.0);
    return periodic_monodromy(h0, h1, omega, opts);
}

double fold_quasienergy(double re, double omega)
{
    double r = std::fmod(0.5 * omega - re, omega);
    if (r < 0.0)
        r += omega;
    return 0.5 * omega - r;
}

FloquetSpectrum quasienergies(const Monodromy& u, const FloquetTolerances& tol)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u.U);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of the monodromy failed");
    const Eigen::VectorXcd lambda = solver.eigenvalues();
    Eigen::MatrixXcd vecs = solver.eigenvectors();
    const Eigen::Index n = lambda.size();
    for (Eigen::Index i = 0; i < n; ++i)
        vecs.col(i).normalize();

    FloquetSpectrum out;
    out.sympl_residual = u.sympl_residual;
    std::vector<bool> coalesced(n, false);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(vecs.col(i).dot(vecs.col(j))) > 1.0 - 1e-6)
                coalesced[i] = coalesced[j] = true;

    // Inside a degenerate cluster any basis is an eigenbasis; pick the one that
    // diagonalizes the Nambu metric so the norms are meaningful.
    const Eigen::VectorXd sig = nambu_signature(n);
    const std::vector<int> label = cluster_labels(lambda, tol.degeneracy);
    std::vector<bool> done(n, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (done[i])
            continue;
        std::vector<Eigen::Index> members;
        for (Eigen::Index j = i; j < n; ++j)
            if (label[j] == label[i])
                members.push_back(j);
        for (auto j : members)
            done[j] = true;
        const bool any_coalesced = std::any_of(members.begin(), members.end(), [&](auto j) { return coalesced[j]; });
        if (members.size() < 2 || any_coalesced)
            continue;
        const auto m = static_cast<Eigen::Index>(members.size());
        Eigen::MatrixXcd block(n, m);
        for (Eigen::Index c = 0; c < m; ++c)
            block.col(c) = vecs.col(members[c]);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
        const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, m);
        const Eigen::MatrixXcd gram = q.adjoint() * sig.asDiagonal() * q;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> metric(gram);
        const Eigen::MatrixXcd rotated = q * metric.eigenvectors();
        for (Eigen::Index c = 0; c < m; ++c)
            vecs.col(members[c]) = rotated.col(c).normalized();
    }

    const double scale = u.omega / two_pi;
    out.branches.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx eps = cplx(0.0, 1.0) * scale * std::log(lambda(i));
        QuasienergyBranch b;
        b.eps = cplx(fold_quasienergy(eps.real(), u.omega), eps.imag());
        b.state = vecs.col(i);
        out.branches.push_back(std::move(b));
        if (coalesced[i])
            out.defective = true;
    }
    out.coalesced = std::move(coalesced);
    return out;
}

void symplectic_norms(FloquetSpectrum& spectrum, const FloquetTolerances& tol)
{
    for (std::size_t i = 0; i < spectrum.branches.size(); ++i) {
        auto& b = spectrum.branches[i];
        b.state.normalize();
        const Eigen::Index half = b.state.size() / 2;
        const double q = b.state.head(half).squaredNorm() - b.state.tail(half).squaredNorm();
        const bool coalesced = i < spectrum.coalesced.size() && spectrum.coalesced[i];
        if (coalesced || std::abs(b.eps.imag()) > tol.tol_im || std::abs(q) <= tol.tol_norm) {
            b.cnorm = 0;
            continue;
        }
        b.cnorm = q > 0.0 ? 1 : -1;
        b.state /= std::sqrt(std::abs(q));
    }
    std::vector<std::size_t> order(spectrum.branches.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = spectrum.branches[a];
        const auto& y = spectrum.branches[b];
        if (x.eps.real() != y.eps.real())
            return x.eps.real() < y.eps.real();
        if (x.eps.imag() != y.eps.imag())
            return x.eps.imag() < y.eps.imag();
        return x.cnorm < y.cnorm;
    });
    std::vector<QuasienergyBranch> sorted;
    std::vector<bool> flags;
    sorted.reserve(order.size());
    for (auto i : order) {
        sorted.push_back(std::move(spectrum.branches[i]));
        flags.push_back(i < spectrum.coalesced.size() && spectrum.coalesced[i]);
    }
    spectrum.branches = std::move(sorted);
    spectrum.coalesced = std::move(flags);
}

FloquetSpectrum floquet_spectrum(const Monodromy& u, const FloquetTolerances& tol)
{
    FloquetSpectrum s = quasienergies(u, tol);
    symplectic_norms(s, tol);
    return s;
}

Stability classify_stability(const std::vector<QuasienergyBranch>& branches, double omega,
                             const FloquetTolerances& tol)
{
    for (const auto& b : branches)
        if (std::abs(b.eps.imag()) > tol.tol_im)
            return Stability::Unstable;
    const double window = tol.resonance_window_rel * omega;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        if (branches[i].cnorm == 0)
            return Stability::MarginallyStable;
        for (std::size_t j = i + 1; j < branches.size(); ++j) {
            if (branches[j].cnorm == 0 || branches[i].cnorm == branches[j].cnorm)
                continue;
            if (circular_distance(branches[i].eps.real(), branches[j].eps.real(), omega) < window)
                return Stability::MarginallyStable;
        }
    }
    return Stability::StronglyStable;
}

std::vector<double> brillouin_grid(int nk)
{
    if (nk < 1)
        throw std::invalid_argument("k-grid needs at least one point");
    std::vector<double> k(nk);
    for (int j = 0; j < nk; ++j)
        k[j] = -std::numbers::pi + two_pi * (j + 1) / nk;
    k.back() = std::numbers::pi;
    return k;
}

GlobalStability global_stability(const ModelParams& params, int nk, const FloquetOptions& opts)
{
    params.validate();
    if (nk < 64)
        throw std::invalid_argument("global_stability needs nk >= 64, got " + std::to_string(nk));
    const std::vector<double> ks = brillouin_grid(nk);
    std::vector<double> max_im(nk, 0.0);
    std::vector<Stability> verdict(nk);
    parallel_for(ks.size(), opts.threads, [&](std::size_t j) {
        try {
            const FloquetSpectrum s = floquet_spectrum(bloch_monodromy(params, ks[j], opts), opts.tol);
            double worst = 0.0;
            for (const auto& b : s.branches)
                worst = std::max(worst, std::abs(b.eps.imag()));
            max_im[j] = worst;
            verdict[j] = classify_stability(s.branches, params.omega, opts.tol);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " (at k = " + std::to_string(ks[j]) + ")");
        }
    });
    GlobalStability out;
    out.max_im_per_k = max_im;
    const auto worst = std::max_element(max_im.begin(), max_im.end());
    out.max_im = *worst;
    out.worst_k = ks[static_cast<std::size_t>(worst - max_im.begin())];
    out.stable = std::none_of(verdict.begin(), verdict.end(), [](Stability s) { return s == Stability::Unstable; });
    out.strongly_stable =
        std::all_of(verdict.begin(), verdict.end(), [](Stability s) { return s == Stability::StronglyStable; });
    return out;
}

} // namespace floqbog
