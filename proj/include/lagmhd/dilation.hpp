#pragma once

#include <cmath>

#include "lagmhd/core.hpp"
#include "lagmhd/errors.hpp"

namespace lagmhd {

/// Uniform dilation flow u = a*y with w = h = 0 and spatially uniform
/// pressure: the one nontrivial closed-form solution of the system.
struct DilationParams {
    double a = 0.5;
    double P_init = 1.0;
    PhysParams params;
};

struct DilationValue {
    double J = 1.0;
    double P = 1.0;
};

/// J(t) = 1 + a t and the pressure ODE
///   P' + gamma*a/(1+a t) P = (gamma-1) lambda a^2 / (1+a t)^2
/// integrated exactly:
///   P(t) = (1+a t)^{-gamma} ( P_init + lambda a ((1+a t)^{gamma-1} - 1) ).
inline DilationValue dilation_exact(const DilationParams& dp, double t) {
    const double J = 1.0 + dp.a * t;
    if (!(J > 0.0))
        throw ValidationError("dilation_exact: queried beyond the collapse time 1 + a t <= 0");
    const double g = dp.params.gamma;
    DilationValue v;
    v.J = J;
    v.P = std::pow(J, -g) * (dp.P_init + dp.params.lambda * dp.a * (std::pow(J, g - 1.0) - 1.0));
    return v;
}

/// Reference integration of the same scalar ODE with classical RK4 at a fixed
/// step; used once to certify the closed form before anything trusts it.
inline double dilation_pressure_ode(const DilationParams& dp, double t, std::size_t nsteps) {
    const double g = dp.params.gamma;
    const double lam = dp.params.lambda;
    const double a = dp.a;
    auto rhs = [&](double tau, double P) {
        const double J = 1.0 + a * tau;
        return -g * a / J * P + (g - 1.0) * lam * a * a / (J * J);
    };
    const double dt = t / static_cast<double>(nsteps);
    double P = dp.P_init;
    double tau = 0.0;
    for (std::size_t k = 0; k < nsteps; ++k) {
        const double k1 = rhs(tau, P);
        const double k2 = rhs(tau + 0.5 * dt, P + 0.5 * dt * k1);
        const double k3 = rhs(tau + 0.5 * dt, P + 0.5 * dt * k2);
        const double k4 = rhs(tau + dt, P + dt * k3);
        P += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tau += dt;
    }
    return P;
}

} // namespace lagmhd
