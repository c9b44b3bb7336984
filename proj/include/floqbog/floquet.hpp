#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "floqbog/model.hpp"

namespace floqbog {

struct FloquetTolerances {
    double tol_im = 1e-8;             ///< |Im eps| above this is an instability
    double tol_norm = 1e-6;           ///< |<psi|Sz|psi>| above this is normalizable
    double resonance_window_rel = 1e-6; ///< resonance window in units of omega
    double tol_sympl = 1e-8;          ///< accepted pseudo-unitarity residual
    double degeneracy = 1e-7;         ///< eigenvalues closer than this form one cluster
};

struct FloquetOptions {
    int steps = 2048;       ///< RK4 steps per drive period
    int max_doublings = 3;  ///< step doublings allowed while the residual exceeds tol_sympl
    int threads = 1;
    FloquetTolerances tol;
};

/// One-period propagator U(2 pi / omega) of i dU/dt = Sz H(t) U.
struct Monodromy {
    Eigen::MatrixXcd U;
    double omega = 1.0;
    int steps = 0;
    double sympl_residual = 0.0; ///< max |U^dag Sz U - Sz|
};

struct QuasienergyBranch {
    cplx eps;      ///< Re eps in (-omega/2, omega/2]
    int cnorm = 0; ///< +1, -1, or 0 when not normalizable
    Eigen::VectorXcd state;
};

struct FloquetSpectrum {
    std::vector<QuasienergyBranch> branches;
    bool defective = false;      ///< some eigenvectors nearly coalesced
    std::vector<bool> coalesced; ///< per branch: eigenvector nearly parallel to another one
    double sympl_residual = 0.0;
};

enum class Stability { StronglyStable, MarginallyStable, Unstable };

const char* to_string(Stability s);

using Generator = std::function<BdGMatrix(double)>;

double pseudo_unitarity_residual(const Eigen::MatrixXcd& u);

/// Generic dense integration of one period. Throws NumericalError on blow-up.
Monodromy monodromy(const Generator& generator, double omega, int steps);

/// Monodromy of a 4x4 problem H(t) = H0 + H1 cos(omega t), doubling the step
/// count while the pseudo-unitarity residual exceeds tol_sympl.
Monodromy periodic_monodromy(const BdGMatrix& static_part, const BdGMatrix& drive_part, double omega,
                             const FloquetOptions& opts);

Monodromy bloch_monodromy(const ModelParams& params, double k, const FloquetOptions& opts);

/// Drive problem with explicitly given static and drive fields (k-independent).
Monodromy field_monodromy(const FieldSample& fields, double mu, double g, double omega,
                          const FloquetOptions& opts);

/// Eigendecomposition of U into quasienergies; cnorm is left at 0.
FloquetSpectrum quasienergies(const Monodromy& u, const FloquetTolerances& tol = {});

/// Assigns cnorm and rescales states so <psi|Sz|psi> = cnorm; sorts by (Re, Im, cnorm).
void symplectic_norms(FloquetSpectrum& spectrum, const FloquetTolerances& tol = {});

/// quasienergies followed by symplectic_norms.
FloquetSpectrum floquet_spectrum(const Monodromy& u, const FloquetTolerances& tol = {});

Stability classify_stability(const std::vector<QuasienergyBranch>& branches, double omega,
                             const FloquetTolerances& tol = {});

/// Maps a real quasienergy into (-omega/2, omega/2].
double fold_quasienergy(double re, double omega);

/// Uniform grid on (-pi, pi]: k_j = -pi + 2 pi (j + 1) / nk.
std::vector<double> brillouin_grid(int nk);

struct GlobalStability {
    bool stable = false;          ///< no k on the grid is Unstable
    bool strongly_stable = false; ///< every k is StronglyStable
    double max_im = 0.0;
    double worst_k = 0.0;
    std::vector<double> max_im_per_k;
};

GlobalStability global_stability(const ModelParams& params, int nk, const FloquetOptions& opts = {});

} // namespace floqbog
