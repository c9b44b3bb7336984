#include "floqbog/effective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "floqbog/floquet.hpp"

namespace floqbog {

double bessel_j(int n, double x)
{
    const int order = std::abs(n);
    double v = std::cyl_bessel_j(static_cast<double>(order), std::abs(x));
    int sign = 1;
    if (n < 0 && order % 2 == 1)
        sign = -sign;
    if (x < 0.0 && order % 2 == 1)
        sign = -sign;
    return sign * v;
}

namespace {

// Reduced static field h^alpha = h0 - alpha (omega/2) h1 / amp.
std::pair<double, double> reduced_field(const FieldSample& f, double omega, int alpha)
{
    const double amp = std::hypot(f.hx1, f.hy1);
    if (amp == 0.0)
        return {f.hx0, f.hy0};
    const double s = alpha * omega / 2.0 / amp;
    return {f.hx0 - s * f.hx1, f.hy0 - s * f.hy1};
}

bool better_index(int candidate, int incumbent)
{
    if (std::abs(candidate) != std::abs(incumbent))
        return std::abs(candidate) < std::abs(incumbent);
    return candidate > incumbent;
}

} // namespace

EffectiveIndices choose_indices(const ModelParams& params, int nk)
{
    params.validate();
    EffectiveIndices out;

    const double ratio = 2.0 * params.mu / params.omega;
    double best = std::numeric_limits<double>::infinity();
    for (int beta : {static_cast<int>(std::floor(ratio)), static_cast<int>(std::ceil(ratio))}) {
        const double d = std::abs(params.mu - beta * params.omega / 2.0);
        if (d < best - 1e-12 || (std::abs(d - best) <= 1e-12 && better_index(beta, out.beta))) {
            best = d;
            out.beta = beta;
        }
    }

    const std::vector<double> ks = brillouin_grid(nk);
    double max_amp = 0.0;
    for (double k : ks) {
        const FieldSample f = drive_fields(params, k, 0.0);
        max_amp = std::max(max_amp, std::hypot(f.hx1, f.hy1));
    }
    const int reach = 2 + static_cast<int>(std::ceil(2.0 * max_amp / params.omega));
    best = std::numeric_limits<double>::infinity();
    out.alpha = 0;
    for (int alpha = -reach; alpha <= reach; ++alpha) {
        double worst = 0.0;
        for (double k : ks) {
            const auto [hx, hy] = reduced_field(drive_fields(params, k, 0.0), params.omega, alpha);
            worst = std::max({worst, std::abs(hx), std::abs(hy)});
        }
        if (worst < best - 1e-12 || (std::abs(worst - best) <= 1e-12 && better_index(alpha, out.alpha))) {
            best = worst;
            out.alpha = alpha;
        }
    }
    return out;
}

EffectiveCoefficients effective_coefficients(const FieldSample& f, double mu, double g, double omega, int alpha,
                                             int beta)
{
    EffectiveCoefficients c;
    c.alpha = alpha;
    c.beta = beta;
    c.amp = std::hypot(f.hx1, f.hy1);
    c.phase_undefined = c.amp == 0.0;
    c.phik = c.phase_undefined ? 0.0 : std::atan2(f.hy1, f.hx1);
    std::tie(c.hx_alpha, c.hy_alpha) = reduced_field(f, omega, alpha);

    const double x = 2.0 * c.amp / omega;
    const double j_alpha = bessel_j(alpha, x);
    const double c2 = std::cos(2.0 * c.phik);
    const double s2 = std::sin(2.0 * c.phik);
    const double hx = c.hx_alpha;
    const double hy = c.hy_alpha;
    // hx * 2 f^{+-}(hy / hx) and hy * 2 f^{-+}(-hx / hy), multiplied out so that a
    // vanishing component does not divide by zero.
    c.heffx = 0.5 * (hx * (1.0 + c2) + hy * s2) + 0.5 * j_alpha * (hx * (1.0 - c2) - hy * s2);
    c.heffy = 0.5 * (hy * (1.0 - c2) + hx * s2) + 0.5 * j_alpha * (hy * (1.0 + c2) - hx * s2);

    c.mueff = mu - beta * omega / 2.0;
    const double j_minus = bessel_j(-beta - alpha, x);
    const double j_plus = bessel_j(beta - alpha, x);
    c.geff = 0.5 * g * (j_minus + j_plus);
    c.Gx = 0.5 * g * std::cos(c.phik) * (j_minus - j_plus);
    c.Gy = 0.5 * g * std::sin(c.phik) * (j_minus - j_plus);
    return c;
}

EffectiveCoefficients effective_coefficients(const ModelParams& params, double k, int alpha, int beta)
{
    params.validate();
    return effective_coefficients(drive_fields(params, k, 0.0), params.mu, params.g, params.omega, alpha, beta);
}

std::pair<cplx, cplx> effective_quasienergies(const EffectiveCoefficients& c)
{
    const double h = std::hypot(c.heffx, c.heffy);
    const double g1 = std::hypot(c.Gx, c.Gy);
    double dphi = 0.0;
    if (h > 0.0 && g1 > 0.0)
        dphi = std::atan2(std::abs(c.Gx * c.heffy - c.Gy * c.heffx), c.Gx * c.heffx + c.Gy * c.heffy);
    const double sd = std::sin(dphi);
    const double sh = std::sin(0.5 * dphi);
    // The sin^2(dphi/2) term carries a factor 4; with 1 the roots are not eigenvalues of
    // the effective matrix once geff, mueff and G are all nonzero.
    const double a = -g1 * h * (g1 * h * sd * sd + 4.0 * c.geff * c.mueff * sh * sh) +
                     (c.geff * g1 + h * c.mueff) * (c.geff * g1 + h * c.mueff);
    const cplx root_a = std::sqrt(cplx(a, 0.0));
    const cplx base(h * h + c.mueff * c.mueff - c.geff * c.geff - g1 * g1, 0.0);
    return {std::sqrt(base + 2.0 * root_a), std::sqrt(base - 2.0 * root_a)};
}

BdGMatrix effective_hamiltonian(const EffectiveCoefficients& c)
{
    // 1 (x) (heff . sigma) - mueff + sx (x) (G . sigma) + geff sx (x) 1
    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd hs, gs;
    hs << 0, c.heffx - i * c.heffy, c.heffx + i * c.heffy, 0;
    gs << c.geff, c.Gx - i * c.Gy, c.Gx + i * c.Gy, c.geff;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m.topLeftCorner(2, 2) = hs - c.mueff * Eigen::Matrix2cd::Identity();
    m.bottomRightCorner(2, 2) = hs - c.mueff * Eigen::Matrix2cd::Identity();
    m.topRightCorner(2, 2) = gs;
    m.bottomLeftCorner(2, 2) = gs;
    return BdGMatrix(std::move(m));
}

bool effective_validity_warning(const EffectiveCoefficients& c, double g, double omega)
{
    const double largest = std::max({std::abs(c.hx_alpha), std::abs(c.hy_alpha), std::abs(c.mueff), g});
    return largest > omega / 4.0;
}

EffectiveSpectrum effective_spectrum(const ModelParams& params, int nk, std::optional<EffectiveIndices> indices,
                                     double tol_im)
{
    params.validate();
    EffectiveSpectrum out;
    out.indices = indices ? *indices : choose_indices(params, nk);
    out.kgrid = brillouin_grid(nk);
    for (double k : out.kgrid) {
        const EffectiveCoefficients c = effective_coefficients(params, k, out.indices.alpha, out.indices.beta);
        const auto [plus, minus] = effective_quasienergies(c);
        out.eps_plus.push_back(plus);
        out.eps_minus.push_back(minus);
        out.max_im = std::max({out.max_im, std::abs(plus.imag()), std::abs(minus.imag())});
        out.validity_warning = out.validity_warning || effective_validity_warning(c, params.g, params.omega);
    }
    out.stable = out.max_im <= tol_im;
    return out;
}

} // namespace floqbog
