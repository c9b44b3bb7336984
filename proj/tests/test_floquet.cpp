#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "floqbog/errors.hpp"
#include "floqbog/floquet.hpp"
#include "support.hpp"

using namespace floqbog;
using testing::circular_distance;

namespace {

constexpr double pi = std::numbers::pi;

BdGMatrix single_mode(double mu, double g)
{
    Eigen::MatrixXcd h(2, 2);
    h << -mu, g, g, -mu;
    return BdGMatrix(h);
}

ModelParams undriven(double nu0, double nu0p, double mu, double g, double omega)
{
    return ModelParams{nu0, nu0p, 0.0, 0.0, g, mu, omega};
}

/// Every element of `a` has a partner in `b` within tol (circular in Re).
bool matched(const std::vector<cplx>& a, std::vector<cplx> b, double omega, double tol)
{
    for (const cplx& x : a) {
        auto best = b.end();
        double dist = tol;
        for (auto it = b.begin(); it != b.end(); ++it) {
            const double d = std::max(circular_distance(x.real(), it->real(), omega), std::abs(x.imag() - it->imag()));
            if (d <= dist) {
                dist = d;
                best = it;
            }
        }
        if (best == b.end())
            return false;
        b.erase(best);
    }
    return true;
}

std::vector<cplx> eps_of(const FloquetSpectrum& s)
{
    std::vector<cplx> out;
    for (const auto& b : s.branches)
        out.push_back(b.eps);
    return out;
}

} // namespace

TEST_CASE("zero generator gives the identity")
{
    const Monodromy m = monodromy([](double) { return BdGMatrix(Eigen::MatrixXcd::Zero(4, 4)); }, 1.3, 64);
    CHECK((m.U - Eigen::MatrixXcd::Identity(4, 4)).norm() == 0.0);
    for (const auto& b : quasienergies(m).branches)
        CHECK(std::abs(b.eps) == 0.0);
}

TEST_CASE("static single mode against the closed-form exponential")
{
    const double mu = -5.0, g = 1.0, omega = 5.2;
    const double w = std::sqrt(mu * mu - g * g);
    const double T = 2.0 * pi / omega;
    Eigen::Matrix2cd a;
    a << -mu, g, -g, mu; // Sz H
    const Eigen::Matrix2cd exact =
        std::cos(w * T) * Eigen::Matrix2cd::Identity() - cplx(0.0, std::sin(w * T) / w) * a;

    const Monodromy m = monodromy([&](double) { return single_mode(mu, g); }, omega, 2048);
    CHECK((m.U - exact).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(m.sympl_residual < 1e-10);

    FloquetSpectrum s = floquet_spectrum(m);
    REQUIRE(s.branches.size() == 2);
    // +sqrt(24) folds to sqrt(24) - 5.2 and carries the positive norm
    CHECK(s.branches[0].eps.real() == doctest::Approx(w - omega).epsilon(1e-9));
    CHECK(s.branches[0].cnorm == 1);
    CHECK(s.branches[1].eps.real() == doctest::Approx(omega - w).epsilon(1e-9));
    CHECK(s.branches[1].cnorm == -1);
    CHECK(s.branches[0].eps.real() == doctest::Approx(-0.3010).epsilon(1e-3));
}

TEST_CASE("step doubling converges at the reference point")
{
    FloquetOptions coarse, fine;
    coarse.steps = 1024;
    coarse.max_doublings = 0;
    fine.steps = 2048;
    fine.max_doublings = 0;
    for (double k : {-2.0, 0.0, 1.0, pi}) {
        const Monodromy a = bloch_monodromy(testing::point_a(), k, coarse);
        const Monodromy b = bloch_monodromy(testing::point_a(), k, fine);
        CHECK((a.U - b.U).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("halving the step leaves quasienergies unchanged")
{
    FloquetOptions a, b;
    a.max_doublings = b.max_doublings = 0;
    b.steps = 2 * a.steps;
    for (const ModelParams& p : {testing::point_a(), testing::point_b()})
        for (double k : brillouin_grid(16)) {
            const auto ea = eps_of(floquet_spectrum(bloch_monodromy(p, k, a)));
            const auto eb = eps_of(floquet_spectrum(bloch_monodromy(p, k, b)));
            CHECK(matched(ea, eb, p.omega, 1e-7));
        }
}

TEST_CASE("identity monodromy has zero quasienergies")
{
    const Monodromy m{Eigen::MatrixXcd::Identity(4, 4), 2.0, 1, 0.0};
    const FloquetSpectrum s = floquet_spectrum(m);
    REQUIRE(s.branches.size() == 4);
    int total = 0;
    for (const auto& b : s.branches) {
        CHECK(std::abs(b.eps) == 0.0);
        total += b.cnorm;
    }
    CHECK(total == 0);
}

TEST_CASE("undriven spectrum matches static diagonalization")
{
    const double nu0 = 0.5, mu = -2.0, g = 0.5, omega = 20.0;
    const ModelParams p = undriven(nu0, 0.0, mu, g, omega);
    const double hi = std::sqrt((-mu + nu0) * (-mu + nu0) - g * g);
    const double lo = std::sqrt((-mu - nu0) * (-mu - nu0) - g * g);
    const FloquetSpectrum s = floquet_spectrum(bloch_monodromy(p, 0.7, {}));
    REQUIRE(s.branches.size() == 4);
    const std::vector<double> expected{-hi, -lo, lo, hi};
    int plus = 0, minus = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s.branches[i].eps.real() == doctest::Approx(expected[i]).epsilon(1e-9));
        CHECK(std::abs(s.branches[i].eps.imag()) < 1e-10);
        // positive-frequency solutions carry positive norm
        CHECK(s.branches[i].cnorm == (expected[i] > 0 ? 1 : -1));
        plus += s.branches[i].cnorm == 1;
        minus += s.branches[i].cnorm == -1;
    }
    CHECK(plus == 2);
    CHECK(minus == 2);
    CHECK(classify_stability(s.branches, omega) == Stability::StronglyStable);
}

TEST_CASE("normalized states satisfy their symplectic norm")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-pi, pi);
    const Eigen::VectorXd sig = nambu_signature(4);
    for (int draw = 0; draw < 50; ++draw) {
        const ModelParams p = testing::random_params(rng);
        const FloquetSpectrum s = floquet_spectrum(bloch_monodromy(p, u(rng), {}));
        CHECK(s.branches.size() == 4);
        int total = 0;
        bool all_normalizable = true;
        for (const auto& b : s.branches) {
            CHECK((b.cnorm == -1 || b.cnorm == 0 || b.cnorm == 1));
            CHECK(b.eps.real() > -p.omega / 2.0);
            CHECK(b.eps.real() <= p.omega / 2.0);
            if (b.cnorm != 0) {
                const double q = b.state.dot(sig.cast<cplx>().asDiagonal() * b.state).real();
                CHECK(q == doctest::Approx(b.cnorm).epsilon(1e-10));
            } else {
                all_normalizable = false;
                CHECK(b.state.norm() == doctest::Approx(1.0));
            }
            if (std::abs(b.eps.imag()) > 1e-8)
                CHECK(b.cnorm == 0);
            total += b.cnorm;
        }
        if (all_normalizable)
            CHECK(total == 0);
    }
}

TEST_CASE("second drive point has growing modes without norm")
{
    const ModelParams p = testing::point_b();
    const GlobalStability gs = global_stability(p, 64);
    CHECK_FALSE(gs.stable);
    CHECK(gs.max_im > 1e-3);
    const FloquetSpectrum s = floquet_spectrum(bloch_monodromy(p, gs.worst_k, {}));
    bool found = false;
    for (const auto& b : s.branches)
        if (std::abs(b.eps.imag()) > 1e-8) {
            found = true;
            CHECK(b.cnorm == 0);
        }
    CHECK(found);
    CHECK(classify_stability(s.branches, p.omega) == Stability::Unstable);
}

TEST_CASE("reference point is strongly stable everywhere")
{
    const GlobalStability gs = global_stability(testing::point_a(), 64);
    CHECK(gs.stable);
    CHECK(gs.strongly_stable);
    CHECK(gs.max_im < 1e-8);
    CHECK(gs.max_im_per_k.size() == 64);
}

TEST_CASE("undriven gapped system is stable to round-off")
{
    const GlobalStability gs = global_stability(undriven(1.5, 0.0, -5.0, 1.0, 5.2), 64);
    CHECK(gs.strongly_stable);
    CHECK(gs.max_im < 1e-10);
}

TEST_CASE("global stability needs a reasonable grid")
{
    CHECK_THROWS_AS(global_stability(testing::point_a(), 32), std::invalid_argument);
}

TEST_CASE("spectrum is closed under conjugation and particle-hole pairing")
{
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.1, pi - 0.1);
    for (int draw = 0; draw < 40; ++draw) {
        const ModelParams p = testing::random_params(rng);
        const double k = u(rng);
        const auto ek = eps_of(floquet_spectrum(bloch_monodromy(p, k, {})));
        const auto emk = eps_of(floquet_spectrum(bloch_monodromy(p, -k, {})));

        std::vector<cplx> conj_k;
        for (const cplx& e : ek)
            conj_k.push_back(std::conj(e));
        CHECK(matched(ek, conj_k, p.omega, 1e-7));

        std::vector<cplx> both = ek, mirrored;
        both.insert(both.end(), emk.begin(), emk.end());
        for (const cplx& e : both)
            mirrored.push_back(-std::conj(e));
        CHECK(matched(both, mirrored, p.omega, 1e-7));
    }
}

TEST_CASE("classification of synthetic branches")
{
    const double omega = 2.0;
    auto branch = [](cplx e, int c) { return QuasienergyBranch{e, c, Eigen::VectorXcd()}; };

    CHECK(classify_stability({branch(0.3, 1), branch(-0.3, -1)}, omega) == Stability::StronglyStable);
    CHECK(classify_stability({branch(cplx(0.3, 1e-6), 0), branch(cplx(0.3, -1e-6), 0)}, omega) ==
          Stability::Unstable);
    CHECK(classify_stability({branch(0.3, 1), branch(0.3, -1)}, omega) == Stability::MarginallyStable);
    CHECK(classify_stability({branch(0.3, 1), branch(0.3, 1)}, omega) == Stability::StronglyStable);
    // resonance across the zone edge
    CHECK(classify_stability({branch(1.0, 1), branch(-1.0 + 1e-9, -1)}, omega) == Stability::MarginallyStable);
    CHECK(classify_stability({branch(0.2, 0), branch(-0.2, 1)}, omega) == Stability::MarginallyStable);
}

TEST_CASE("quasienergy folding")
{
    CHECK(fold_quasienergy(0.0, 2.0) == 0.0);
    CHECK(fold_quasienergy(1.0, 2.0) == 1.0);
    CHECK(fold_quasienergy(-1.0, 2.0) == 1.0);
    CHECK(fold_quasienergy(1.5, 2.0) == doctest::Approx(-0.5));
    CHECK(fold_quasienergy(-4.5, 2.0) == doctest::Approx(-0.5));
    CHECK(fold_quasienergy(std::sqrt(24.0), 5.2) == doctest::Approx(std::sqrt(24.0) - 5.2));
}

TEST_CASE("brillouin grid covers the half-open zone")
{
    const auto ks = brillouin_grid(8);
    REQUIRE(ks.size() == 8);
    CHECK(ks.front() == doctest::Approx(-pi + pi / 4.0));
    CHECK(ks.back() == doctest::Approx(pi));
    for (std::size_t j = 1; j < ks.size(); ++j)
        CHECK(ks[j] - ks[j - 1] == doctest::Approx(pi / 4.0));
}

TEST_CASE("coalescing eigenvectors are flagged")
{
    Eigen::MatrixXcd u(2, 2);
    u << 1.0, 1.0, 0.0, 1.0;
    const FloquetSpectrum s = floquet_spectrum(Monodromy{u, 1.0, 1, 0.0});
    CHECK(s.defective);
    REQUIRE(s.branches.size() == 2);
    for (const auto& b : s.branches)
        CHECK(b.cnorm == 0);
}

TEST_CASE("integrator blow-up is reported")
{
    auto huge = [](double) {
        Eigen::MatrixXcd h(2, 2);
        h << 0.0, 1e300, 1e300, 0.0;
        return BdGMatrix(h);
    };
    CHECK_THROWS_AS(monodromy(huge, 1.0, 64), NumericalError);
}

TEST_CASE("pseudo-unitarity at default resolution")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int draw = 0; draw < 100; ++draw) {
        const ModelParams p = testing::random_params(rng);
        const Monodromy m = bloch_monodromy(p, u(rng), {});
        CHECK(m.sympl_residual < 1e-8);
        CHECK(pseudo_unitarity_residual(m.U) == m.sympl_residual);
    }
}
