#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "floqbog/effective.hpp"
#include "floqbog/floquet.hpp"
#include "support.hpp"

using namespace floqbog;
using testing::circular_distance;

namespace {

constexpr double pi = std::numbers::pi;

/// J_n(x) for n >= 0 by Miller's backward recurrence, normalized with
/// J_0 + 2 sum J_2k = 1.
double bessel_recurrence(int n, double x)
{
    if (x == 0.0)
        return n == 0 ? 1.0 : 0.0;
    const int start = 2 * (std::max(n, static_cast<int>(std::abs(x))) + 30);
    long double next = 0.0L, cur = 1e-30L, result = 0.0L, norm = 0.0L;
    for (int m = start; m >= 0; --m) {
        if (m == n)
            result = cur;
        if (m % 2 == 0)
            norm += (m == 0 ? 1.0L : 2.0L) * cur;
        const long double prev = 2.0L * m / x * cur - next;
        next = cur;
        cur = prev;
        if (std::abs(cur) > 1e200L) {
            next /= 1e200L;
            cur /= 1e200L;
            result /= 1e200L;
            norm /= 1e200L;
        }
    }
    return static_cast<double>(result / norm);
}

/// Power series, accurate for small arguments.
double bessel_series(int n, double x)
{
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i)
        term *= x / 2.0L / i;
    long double sum = term;
    for (int m = 1; m < 80; ++m) {
        term *= -(x / 2.0L) * (x / 2.0L) / (m * static_cast<long double>(m + n));
        sum += term;
    }
    return static_cast<double>(sum);
}

std::vector<double> sorted_real(std::vector<cplx> v)
{
    std::vector<double> r;
    for (const auto& e : v)
        r.push_back(e.real());
    std::sort(r.begin(), r.end());
    return r;
}

} // namespace

TEST_CASE("bessel functions against independent oracles")
{
    for (int n = 0; n <= 8; ++n)
        for (double x = 0.0; x <= 20.0; x += 0.25) {
            const double ref = bessel_recurrence(n, x);
            CHECK(std::abs(bessel_j(n, x) - ref) < 1e-12);
            CHECK(std::abs(bessel_j(-n, x) - (n % 2 ? -ref : ref)) < 1e-12);
            CHECK(std::abs(bessel_j(n, -x) - (n % 2 ? -ref : ref)) < 1e-12);
            if (x <= 4.0)
                CHECK(std::abs(bessel_j(n, x) - bessel_series(n, x)) < 1e-12);
        }
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(3, 0.0) == 0.0);
}

TEST_CASE("index choice for the reference point")
{
    const EffectiveIndices idx = choose_indices(testing::point_a());
    CHECK(idx.beta == -2);
    CHECK(idx.alpha == 0);
    const EffectiveCoefficients c = effective_coefficients(testing::point_a(), 0.3, idx.alpha, idx.beta);
    CHECK(c.mueff == doctest::Approx(0.2));
}

TEST_CASE("index choice without chemical potential or drive")
{
    ModelParams p = testing::point_a();
    p.mu = 0.0;
    CHECK(choose_indices(p).beta == 0);
    p.nu1 = p.nu1p = 0.0;
    CHECK(choose_indices(p).alpha == 0);
}

TEST_CASE("effective chemical potential stays within a quarter frequency")
{
    std::mt19937_64 rng(41);
    for (int draw = 0; draw < 200; ++draw) {
        const ModelParams p = testing::random_params(rng);
        const EffectiveIndices idx = choose_indices(p, 64);
        CHECK(std::abs(p.mu - idx.beta * p.omega / 2.0) <= p.omega / 4.0 + 1e-12);
    }
}

TEST_CASE("drive magnitude and phase")
{
    FieldSample f;
    f.hx1 = 3.0;
    f.hy1 = 4.0;
    CHECK(effective_coefficients(f, 0.0, 1.0, 5.0, 0, 0).amp == doctest::Approx(5.0));
    f.hx1 = 0.0;
    f.hy1 = 2.0;
    CHECK(effective_coefficients(f, 0.0, 1.0, 5.0, 0, 0).phik == doctest::Approx(pi / 2.0));
    f.hy1 = 0.0;
    const EffectiveCoefficients c = effective_coefficients(f, 0.0, 1.0, 5.0, 0, 0);
    CHECK(c.phase_undefined);
    CHECK(c.phik == 0.0);
    CHECK(std::hypot(c.Gx, c.Gy) == 0.0);
}

TEST_CASE("aligned drive keeps the parallel field component")
{
    FieldSample f;
    f.hx0 = 0.7;
    f.hy0 = -0.4;
    f.hx1 = 2.5;
    const double omega = 5.0;
    for (int alpha : {-1, 0, 1}) {
        const EffectiveCoefficients c = effective_coefficients(f, 0.0, 1.0, omega, alpha, 0);
        CHECK(c.heffx == doctest::Approx(c.hx_alpha));
        CHECK(c.heffy == doctest::Approx(bessel_j(alpha, 2.0 * 2.5 / omega) * c.hy_alpha));
    }
}

TEST_CASE("closed-form quasienergies diagonalize the effective matrix")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int compared = 0;
    for (int draw = 0; draw < 500; ++draw) {
        EffectiveCoefficients c;
        c.heffx = u(rng);
        c.heffy = u(rng);
        c.mueff = 2.0 * u(rng);
        c.geff = 0.5 * u(rng);
        c.Gx = 0.5 * u(rng);
        c.Gy = 0.5 * u(rng);
        const auto [ep, em] = effective_quasienergies(c);
        const Eigen::VectorXcd ev = effective_hamiltonian(c).dynamical_matrix().eigenvalues();
        std::vector<cplx> numeric(ev.data(), ev.data() + ev.size());
        std::vector<cplx> closed{ep, -ep, em, -em};
        // compare as multisets, pairing each closed-form value with its nearest eigenvalue
        for (const cplx& e : closed) {
            double best = 1e300;
            for (const cplx& n : numeric)
                best = std::min(best, std::abs(n - e));
            CHECK(best < 1e-7);
        }
        ++compared;
    }
    CHECK(compared == 500);
}

TEST_CASE("undriven effective spectrum equals the exact one")
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> hop(-1.0, 1.0);
    for (int draw = 0; draw < 20; ++draw) {
        const ModelParams p{hop(rng), hop(rng), 0.0, 0.0, 0.5, -4.0, 30.0};
        for (double k : brillouin_grid(16)) {
            const EffectiveCoefficients c = effective_coefficients(p, k, 0, 0);
            const auto [ep, em] = effective_quasienergies(c);
            const double h = std::hypot(drive_fields(p, k, 0.0).hx0, drive_fields(p, k, 0.0).hy0);
            const double hi = std::sqrt((-p.mu + h) * (-p.mu + h) - p.g * p.g);
            const double lo = std::sqrt((-p.mu - h) * (-p.mu - h) - p.g * p.g);
            CHECK(std::abs(ep.real() - hi) < 1e-8);
            CHECK(std::abs(em.real() - lo) < 1e-8);

            const FloquetSpectrum s = floquet_spectrum(bloch_monodromy(p, k, {}));
            const auto exact = sorted_real({s.branches[0].eps, s.branches[1].eps, s.branches[2].eps,
                                            s.branches[3].eps});
            const auto eff = sorted_real({-ep, -em, em, ep});
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(std::abs(exact[i] - eff[i]) < 1e-8);
        }
    }
}

TEST_CASE("effective stability at both drive points")
{
    const EffectiveSpectrum a = effective_spectrum(testing::point_a(), 256, EffectiveIndices{0, -2});
    CHECK(a.stable);
    CHECK(a.max_im < 1e-9);
    const EffectiveSpectrum b = effective_spectrum(testing::point_b(), 256, EffectiveIndices{0, -2});
    CHECK_FALSE(b.stable);
    CHECK(b.max_im > 1e-3);
}

TEST_CASE("effective bands follow the exact quasienergies")
{
    const ModelParams p = testing::point_a();
    const double half = p.omega / 2.0;
    double worst = 0.0;
    for (double k : brillouin_grid(32)) {
        const auto [ep, em] = effective_quasienergies(effective_coefficients(p, k, 0, -2));
        const FloquetSpectrum s = floquet_spectrum(bloch_monodromy(p, k, {}));
        for (const cplx& e : {ep, em, -ep, -em}) {
            double best = 1e300;
            for (const auto& b : s.branches)
                best = std::min(best, circular_distance(e.real(), b.eps.real(), half));
            worst = std::max(worst, best);
        }
    }
    CHECK(worst < 0.15);
}

TEST_CASE("validity warning at intermediate frequency")
{
    const EffectiveCoefficients c = effective_coefficients(testing::point_a(), 0.0, 0, -2);
    CHECK(effective_validity_warning(c, 1.0, 5.2));
    CHECK_FALSE(effective_validity_warning(c, 1.0, 1000.0));
}
