#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "floqbog/model.hpp"

namespace testing {

using floqbog::cplx;
using floqbog::ModelParams;

inline ModelParams point_a()
{
    return ModelParams{1.5, 0.0, 3.0, 11.0, 1.0, -5.0, 5.2};
}

inline ModelParams point_b()
{
    ModelParams p = point_a();
    p.nu1p = 6.0;
    return p;
}

inline ModelParams random_params(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> hop(-4.0, 4.0);
    std::uniform_real_distribution<double> drive(-8.0, 8.0);
    std::uniform_real_distribution<double> mu(-8.0, 8.0);
    std::uniform_real_distribution<double> g(0.0, 2.0);
    std::uniform_real_distribution<double> omega(1.0, 8.0);
    return ModelParams{hop(rng), hop(rng), drive(rng), drive(rng), g(rng), mu(rng), omega(rng)};
}

inline Eigen::Matrix2cd pauli(int i)
{
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    const cplx I(0.0, 1.0);
    switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    default: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b)
{
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

/// Sorted real parts folded into (-omega/2, omega/2].
inline double circular_distance(double a, double b, double period)
{
    double d = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}

} // namespace testing
