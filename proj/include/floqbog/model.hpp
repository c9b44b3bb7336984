#pragma once

#include <complex>
#include <Eigen/Dense>

namespace floqbog {

using cplx = std::complex<double>;

/// Physical parameters of the driven two-band chain, all energies in units of g.
///
/// Hoppings are nu(t) = nu0 + nu1 cos(omega t) inside a unit cell and
/// nu'(t) = nu0p + nu1p cos(omega t) between neighbouring cells.
struct ModelParams {
    double nu0 = 0.0;
    double nu0p = 0.0;
    double nu1 = 0.0;
    double nu1p = 0.0;
    double g = 1.0;
    double mu = 0.0;
    double omega = 1.0;

    /// Throws std::invalid_argument unless omega > 0, g >= 0 and every field is finite.
    void validate() const;

    double period() const;
    double intra_hopping(double t) const;
    double inter_hopping(double t) const;
};

/// Linear interpolation between two parameter sets, s in [0, 1].
ModelParams lerp(const ModelParams& a, const ModelParams& b, double s);

/// Pseudo-field at fixed k, split into static and drive amplitudes.
struct FieldSample {
    double hx0 = 0.0;
    double hy0 = 0.0;
    double hx1 = 0.0;
    double hy1 = 0.0;
    double hx = 0.0; ///< instantaneous hx0 + hx1 cos(omega t)
    double hy = 0.0; ///< instantaneous hy0 + hy1 cos(omega t)
};

/// Dense Hermitian Bogoliubov matrix in the Nambu basis (particles first, then holes).
class BdGMatrix {
public:
    BdGMatrix() = default;
    explicit BdGMatrix(Eigen::MatrixXcd entries);

    Eigen::Index dim() const { return m_entries.rows(); }
    Eigen::Index modes() const { return m_entries.rows() / 2; }
    const Eigen::MatrixXcd& entries() const { return m_entries; }
    Eigen::MatrixXcd& entries() { return m_entries; }

    double hermiticity_residual() const;

    /// Sigma_z H, the generator of the linear equations of motion.
    Eigen::MatrixXcd dynamical_matrix() const;

private:
    Eigen::MatrixXcd m_entries;
};

/// The Nambu metric diag(+1 ... +1, -1 ... -1) of size dim.
Eigen::VectorXd nambu_signature(Eigen::Index dim);

FieldSample drive_fields(const ModelParams& params, double k, double t);

/// H = 1 (x) (hx sx + hy sy) - mu 1 (x) 1 + g sx (x) 1 for an explicit pseudo-field.
BdGMatrix field_hamiltonian(double hx, double hy, double mu, double g);

BdGMatrix bloch_hamiltonian(const ModelParams& params, double k, double t);

/// Open chain of M unit cells (N = 2M sites, site index 2m + s with s in {0, 1}).
/// Particle block K(t), pairing block g * identity.
BdGMatrix chain_hamiltonian(const ModelParams& params, int cells, double t);

/// Particle-particle block K(t) of the open chain (real symmetric N x N).
Eigen::MatrixXd chain_hopping_block(const ModelParams& params, int cells, double t);

/// Deviation of the momentum-space matrix from the generalized chiral symmetry
/// with Sigma = sz (x) sz, after removing the -mu and g sx (x) 1 terms.
double chiral_residual(const BdGMatrix& h, double mu, double g);

} // namespace floqbog
