#include "floqbog/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace floqbog {

namespace {

const Eigen::Matrix2cd& pauli_x()
{
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    return m;
}

const Eigen::Matrix2cd& pauli_y()
{
    static const Eigen::Matrix2cd m =
        (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    return m;
}

const Eigen::Matrix2cd& pauli_z()
{
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    return m;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b)
{
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

} // namespace

void ModelParams::validate() const
{
    const double fields[] = {nu0, nu0p, nu1, nu1p, g, mu, omega};
    for (double v : fields)
        if (!std::isfinite(v))
            throw std::invalid_argument("model parameters must be finite");
    if (!(omega > 0.0))
        throw std::invalid_argument("omega must be positive, got " + std::to_string(omega));
    if (g < 0.0)
        throw std::invalid_argument("g must be non-negative, got " + std::to_string(g));
}

double ModelParams::period() const { return 2.0 * std::numbers::pi / omega; }

double ModelParams::intra_hopping(double t) const { return nu0 + nu1 * std::cos(omega * t); }

double ModelParams::inter_hopping(double t) const { return nu0p + nu1p * std::cos(omega * t); }

ModelParams lerp(const ModelParams& a, const ModelParams& b, double s)
{
    auto mix = [s](double x, double y) { return x + s * (y - x); };
    return {mix(a.nu0, b.nu0), mix(a.nu0p, b.nu0p), mix(a.nu1, b.nu1), mix(a.nu1p, b.nu1p),
            mix(a.g, b.g),     mix(a.mu, b.mu),     mix(a.omega, b.omega)};
}

BdGMatrix::BdGMatrix(Eigen::MatrixXcd entries)
    : m_entries(std::move(entries))
{
    if (m_entries.rows() != m_entries.cols() || m_entries.rows() % 2 != 0 || m_entries.rows() == 0)
        throw std::invalid_argument("BdG matrix must be square with even positive dimension");
}

double BdGMatrix::hermiticity_residual() const
{
    return (m_entries - m_entries.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd BdGMatrix::dynamical_matrix() const
{
    Eigen::MatrixXcd out = m_entries;
    out.bottomRows(modes()) *= -1.0;
    return out;
}

Eigen::VectorXd nambu_signature(Eigen::Index dim)
{
    Eigen::VectorXd s(dim);
    s.head(dim / 2).setOnes();
    s.tail(dim / 2).setConstant(-1.0);
    return s;
}

FieldSample drive_fields(const ModelParams& params, double k, double t)
{
    FieldSample f;
    f.hx0 = -params.nu0 - params.nu0p * std::cos(k);
    f.hy0 = -params.nu0p * std::sin(k);
    f.hx1 = -params.nu1 - params.nu1p * std::cos(k);
    f.hy1 = -params.nu1p * std::sin(k);
    const double c = std::cos(params.omega * t);
    f.hx = f.hx0 + f.hx1 * c;
    f.hy = f.hy0 + f.hy1 * c;
    return f;
}

BdGMatrix field_hamiltonian(double hx, double hy, double mu, double g)
{
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd hsig = hx * pauli_x() + hy * pauli_y();
    Eigen::Matrix4cd h = kron(id, hsig) - mu * Eigen::Matrix4cd::Identity() + g * kron(pauli_x(), id);
    return BdGMatrix(Eigen::MatrixXcd(h));
}

BdGMatrix bloch_hamiltonian(const ModelParams& params, double k, double t)
{
    const FieldSample f = drive_fields(params, k, t);
    return field_hamiltonian(f.hx, f.hy, params.mu, params.g);
}

Eigen::MatrixXd chain_hopping_block(const ModelParams& params, int cells, double t)
{
    if (cells < 2)
        throw std::invalid_argument("chain needs at least 2 unit cells, got " + std::to_string(cells));
    const Eigen::Index n = 2 * cells;
    const double intra = params.intra_hopping(t);
    const double inter = params.inter_hopping(t);
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    k.diagonal().setConstant(-params.mu);
    for (int m = 0; m < cells; ++m) {
        k(2 * m, 2 * m + 1) = k(2 * m + 1, 2 * m) = -intra;
        if (m + 1 < cells)
            k(2 * m + 1, 2 * m + 2) = k(2 * m + 2, 2 * m + 1) = -inter;
    }
    return k;
}

BdGMatrix chain_hamiltonian(const ModelParams& params, int cells, double t)
{
    const Eigen::MatrixXd k = chain_hopping_block(params, cells, t);
    const Eigen::Index n = k.rows();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    h.topLeftCorner(n, n) = k.cast<cplx>();
    h.bottomRightCorner(n, n) = k.cast<cplx>();
    h.topRightCorner(n, n).diagonal().setConstant(params.g);
    h.bottomLeftCorner(n, n).diagonal().setConstant(params.g);
    return BdGMatrix(std::move(h));
}

double chiral_residual(const BdGMatrix& h, double mu, double g)
{
    if (h.dim() != 4)
        throw std::invalid_argument("chiral residual is defined for the 4x4 momentum-space matrix");
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix4cd sigma = kron(pauli_z(), pauli_z());
    const Eigen::Matrix4cd hop =
        h.entries() + mu * Eigen::Matrix4cd::Identity() - g * kron(pauli_x(), id);
    return (sigma * hop * sigma + hop).cwiseAbs().maxCoeff();
}

} // namespace floqbog
