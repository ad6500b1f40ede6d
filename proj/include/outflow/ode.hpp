#pragma once

#include <array>
#include <cstddef>

namespace outflow::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double a, const Vec<N>& k)
{
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + a * k[i];
    }
    return out;
}

/// One classical fourth-order Runge-Kutta step; h may be negative.
template <std::size_t N, class Rhs>
Vec<N> rk4_step(const Rhs& f, double x, const Vec<N>& y, double h)
{
    const Vec<N> k1 = f(x, y);
    const Vec<N> k2 = f(x + 0.5 * h, axpy(y, 0.5 * h, k1));
    const Vec<N> k3 = f(x + 0.5 * h, axpy(y, 0.5 * h, k2));
    const Vec<N> k4 = f(x + h, axpy(y, h, k3));
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

/// Integrates from x0 over [x0, x0 + span] in `steps` equal RK4 steps.
template <std::size_t N, class Rhs>
Vec<N> rk4_integrate(const Rhs& f, double x0, Vec<N> y, double span, std::size_t steps)
{
    const double h = span / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        y = rk4_step<N>(f, x0 + static_cast<double>(i) * h, y, h);
    }
    return y;
}

} // namespace outflow::ode
