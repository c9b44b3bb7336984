#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "floqbog/floquet.hpp"
#include "floqbog/model.hpp"
#include "support.hpp"

using namespace floqbog;
using testing::kron;
using testing::pauli;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::Matrix4cd bloch_oracle(const ModelParams& p, double k, double t)
{
    const double nu = p.nu0 + p.nu1 * std::cos(p.omega * t);
    const double nup = p.nu0p + p.nu1p * std::cos(p.omega * t);
    const double hx = -nu - nup * std::cos(k);
    const double hy = -nup * std::sin(k);
    return kron(pauli(0), hx * pauli(1) + hy * pauli(2)) - p.mu * Eigen::Matrix4cd::Identity() +
           p.g * kron(pauli(1), pauli(0));
}

} // namespace

TEST_CASE("drive fields at the reference point")
{
    const FieldSample f = drive_fields(testing::point_a(), 0.0, 0.0);
    CHECK(f.hx == doctest::Approx(-15.5).epsilon(1e-15));
    CHECK(f.hy == 0.0);
    CHECK(f.hx0 == doctest::Approx(-1.5));
    CHECK(f.hx1 == doctest::Approx(-14.0));
}

TEST_CASE("drive fields vanish without hopping")
{
    ModelParams p;
    p.mu = -3.0;
    p.omega = 2.0;
    for (double k : {-2.0, 0.3, pi}) {
        const FieldSample f = drive_fields(p, k, 0.7);
        CHECK(f.hx0 == 0.0);
        CHECK(f.hy0 == 0.0);
        CHECK(f.hx1 == 0.0);
        CHECK(f.hy1 == 0.0);
    }
}

TEST_CASE("static inter-cell hopping at quarter zone")
{
    ModelParams p;
    p.nu0p = 1.0;
    const FieldSample f = drive_fields(p, pi / 2.0, 0.0);
    CHECK(std::abs(f.hx0) < 1e-15);
    CHECK(f.hy0 == doctest::Approx(-1.0));
}

TEST_CASE("drive amplitudes trace a circle")
{
    std::mt19937_64 rng(11);
    for (int draw = 0; draw < 50; ++draw) {
        const ModelParams p = testing::random_params(rng);
        for (double k : brillouin_grid(64)) {
            const FieldSample f = drive_fields(p, k, 0.0);
            const double r = std::hypot(f.hx1 + p.nu1, f.hy1);
            CHECK(std::abs(r - std::abs(p.nu1p)) < 1e-12);
        }
    }
}

TEST_CASE("instantaneous field reconstruction")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int draw = 0; draw < 100; ++draw) {
        const ModelParams p = testing::random_params(rng);
        const double k = u(rng), t = u(rng);
        const FieldSample f = drive_fields(p, k, t);
        const double nu = p.nu0 + p.nu1 * std::cos(p.omega * t);
        const double nup = p.nu0p + p.nu1p * std::cos(p.omega * t);
        CHECK(std::abs(f.hx - (-nu - nup * std::cos(k))) < 1e-12);
        CHECK(std::abs(f.hy - (-nup * std::sin(k))) < 1e-12);
    }
}

TEST_CASE("bloch matrix of an empty model is zero")
{
    ModelParams p;
    p.g = 0.0;
    CHECK(bloch_hamiltonian(p, 0.4, 0.1).entries().norm() == 0.0);
}

TEST_CASE("bloch matrix with only chemical potential and pairing")
{
    ModelParams p;
    p.g = 1.0;
    p.mu = -5.0;
    const Eigen::MatrixXcd h = bloch_hamiltonian(p, 1.1, 0.2).entries();
    Eigen::Matrix4cd expected = 5.0 * Eigen::Matrix4cd::Identity();
    expected(0, 2) = expected(2, 0) = expected(1, 3) = expected(3, 1) = 1.0;
    CHECK((h - expected).norm() == 0.0);
}

TEST_CASE("bloch matrix matches a Kronecker-product construction")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int draw = 0; draw < 200; ++draw) {
        const ModelParams p = testing::random_params(rng);
        const double k = u(rng), t = u(rng);
        const BdGMatrix h = bloch_hamiltonian(p, k, t);
        CHECK((h.entries() - bloch_oracle(p, k, t)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(h.hermiticity_residual() < 1e-12);
    }
}

TEST_CASE("chiral symmetry holds for every bloch matrix")
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int draw = 0; draw < 1000; ++draw) {
        const ModelParams p = testing::random_params(rng);
        CHECK(chiral_residual(bloch_hamiltonian(p, u(rng), u(rng)), p.mu, p.g) < 1e-12);
    }
}

TEST_CASE("chiral residual detects a sublattice-even term")
{
    const ModelParams p = testing::point_a();
    BdGMatrix h = bloch_hamiltonian(p, 0.0, 0.0);
    CHECK(chiral_residual(h, p.mu, p.g) < 1e-12);
    h.entries() += kron(pauli(3), pauli(0));
    CHECK(chiral_residual(h, p.mu, p.g) == doctest::Approx(2.0));

    CHECK(chiral_residual(BdGMatrix(Eigen::MatrixXcd::Zero(4, 4)), 0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(chiral_residual(BdGMatrix(Eigen::MatrixXcd::Zero(6, 6)), 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("chain of two empty cells is zero")
{
    ModelParams p;
    p.g = 0.0;
    const BdGMatrix h = chain_hamiltonian(p, 2, 0.0);
    CHECK(h.dim() == 8);
    CHECK(h.entries().norm() == 0.0);
}

TEST_CASE("intra-cell hopping fills only intra-cell bonds")
{
    ModelParams p;
    p.nu0 = 1.0;
    p.g = 0.0;
    const Eigen::MatrixXd k = chain_hopping_block(p, 2, 0.0);
    Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
    expected(0, 1) = expected(1, 0) = -1.0;
    expected(2, 3) = expected(3, 2) = -1.0;
    CHECK((k - expected).norm() == 0.0);
}

TEST_CASE("chain rejects fewer than two cells")
{
    CHECK_THROWS_AS(chain_hamiltonian(testing::point_a(), 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chain_hopping_block(testing::point_a(), 0, 0.0), std::invalid_argument);
}

TEST_CASE("bulk rows of the chain transform into the bloch matrix")
{
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-pi, pi);
    const int cells = 8;
    const int n = 2 * cells;
    const int m0 = cells / 2;
    for (int draw = 0; draw < 100; ++draw) {
        const ModelParams p = testing::random_params(rng);
        const double k = u(rng), t = u(rng);
        const Eigen::MatrixXcd h = chain_hamiltonian(p, cells, t).entries();
        CHECK(h.adjoint().isApprox(h, 1e-14));
        Eigen::Matrix4cd ft = Eigen::Matrix4cd::Zero();
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int d = -1; d <= 1; ++d) {
                    const int row = (a / 2) * n + 2 * m0 + a % 2;
                    const int col = (b / 2) * n + 2 * (m0 + d) + b % 2;
                    ft(a, b) += h(row, col) * std::polar(1.0, k * d);
                }
        CHECK((ft - bloch_oracle(p, k, t)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("parameter validation")
{
    ModelParams p = testing::point_a();
    CHECK_NOTHROW(p.validate());
    p.omega = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = testing::point_a();
    p.g = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = testing::point_a();
    p.mu = std::nan("");
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("bogoliubov matrices need an even dimension")
{
    CHECK_THROWS_AS(BdGMatrix(Eigen::MatrixXcd::Zero(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(BdGMatrix(Eigen::MatrixXcd::Zero(4, 2)), std::invalid_argument);
    const Eigen::VectorXd s = nambu_signature(6);
    CHECK(s.head(3).isOnes());
    CHECK((-s.tail(3)).isOnes());
}
