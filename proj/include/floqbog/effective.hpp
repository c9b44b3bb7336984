#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "floqbog/model.hpp"

namespace floqbog {

/// Integer Bessel function J_n(x) for any sign of n and x.
double bessel_j(int n, double x);

struct EffectiveIndices {
    int alpha = 0; ///< drive-renormalization index, reduces the effective gap
    int beta = 0;  ///< shifts the chemical potential by beta * omega / 2
};

/// beta minimizes |mu - beta omega/2|; alpha minimizes the largest |h^alpha_x|, |h^alpha_y|
/// over the k-grid. Ties go to the smaller |index| (non-negative first).
EffectiveIndices choose_indices(const ModelParams& params, int nk = 256);

/// Rotating-wave coefficients of the time-independent effective Hamiltonian at one k.
struct EffectiveCoefficients {
    int alpha = 0;
    int beta = 0;
    double hx_alpha = 0.0; ///< reduced static field before averaging
    double hy_alpha = 0.0;
    double heffx = 0.0;
    double heffy = 0.0;
    double mueff = 0.0;
    double geff = 0.0;
    double Gx = 0.0;
    double Gy = 0.0;
    double phik = 0.0;
    double amp = 0.0; ///< sqrt(hx1^2 + hy1^2), the fourth root of det H_{k,1}
    bool phase_undefined = false; ///< amp == 0, phik set to 0
};

EffectiveCoefficients effective_coefficients(const ModelParams& params, double k, int alpha, int beta);

/// Same, for explicitly given static and drive fields.
EffectiveCoefficients effective_coefficients(const FieldSample& fields, double mu, double g, double omega,
                                             int alpha, int beta);

/// Closed-form eigenvalues (eps_plus, eps_minus) of the effective problem; the
/// negatives are the remaining two. Complex values signal an instability.
std::pair<cplx, cplx> effective_quasienergies(const EffectiveCoefficients& c);

/// The 4x4 effective Bogoliubov matrix built from the coefficients.
BdGMatrix effective_hamiltonian(const EffectiveCoefficients& c);

/// True when max(|h^alpha|, |mu_eff|, g) exceeds omega/4.
bool effective_validity_warning(const EffectiveCoefficients& c, double g, double omega);

struct EffectiveSpectrum {
    EffectiveIndices indices;
    std::vector<double> kgrid;
    std::vector<cplx> eps_plus;
    std::vector<cplx> eps_minus;
    double max_im = 0.0;
    bool stable = true;            ///< every eps is real within tol_im
    bool validity_warning = false;
};

EffectiveSpectrum effective_spectrum(const ModelParams& params, int nk,
                                     std::optional<EffectiveIndices> indices = std::nullopt,
                                     double tol_im = 1e-9);

} // namespace floqbog
