#pragma once

#include <Eigen/Dense>

namespace floqbog {

/// Classical fixed-step RK4 for the matrix ODE dU/dt = F(t, U).
///
/// `deriv(t, u, du)` must write F(t, u) into du. Matrix may be a fixed-size or
/// dynamic Eigen type; no allocations happen inside the loop for fixed sizes.
template <class Matrix, class Derivative>
void rk4_integrate(Derivative&& deriv, Matrix& u, double t0, double dt, long steps)
{
    Matrix k1 = u, k2 = u, k3 = u, k4 = u, tmp = u;
    for (long n = 0; n < steps; ++n) {
        const double t = t0 + static_cast<double>(n) * dt;
        deriv(t, u, k1);
        tmp = u + (0.5 * dt) * k1;
        deriv(t + 0.5 * dt, tmp, k2);
        tmp = u + (0.5 * dt) * k2;
        deriv(t + 0.5 * dt, tmp, k3);
        tmp = u + dt * k3;
        deriv(t + dt, tmp, k4);
        u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

} // namespace floqbog
