#pragma once

#include <vector>

#include "lagmhd/core.hpp"
#include "lagmhd/operators.hpp"
#include "lagmhd/state.hpp"

namespace lagmhd {

/// Effective viscous fluxes and pointwise thermodynamics derived from a state:
///   F = mu w_y/J + h   (two components)
///   G = lambda u_y/J - P - H/2
///   H = |h|^2
struct DerivedFields {
    Vec2Field F;
    std::vector<double> G;
    std::vector<double> H;
    std::vector<double> rho;
    std::vector<double> theta;
    std::vector<double> s;
    std::vector<char> s_defined;
    std::vector<double> u_y; // ddy(u), reused by several diagnostics
    Vec2Field w_y;
};

inline DerivedFields derived_fields(const State& st, const PhysParams& pp) {
    const Grid& g = st.grid();
    const std::size_t n = g.N;
    for (std::size_t i = 0; i < n; ++i)
        if (!(st.J[i] > 0.0))
            throw NumericalError("derived_fields: nonpositive Jacobian", i, st.t);

    DerivedFields d;
    d.u_y = ddy(st.u, g);
    d.w_y[0] = ddy(st.w[0], g);
    d.w_y[1] = ddy(st.w[1], g);
    d.F[0].resize(n);
    d.F[1].resize(n);
    d.G.resize(n);
    d.H.resize(n);
    d.rho.resize(n);
    d.theta.resize(n);
    d.s.resize(n);
    d.s_defined.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double Ji = st.J[i];
        d.F[0][i] = pp.mu * d.w_y[0][i] / Ji + st.h[0][i];
        d.F[1][i] = pp.mu * d.w_y[1][i] / Ji + st.h[1][i];
        d.H[i] = st.h[0][i] * st.h[0][i] + st.h[1][i] * st.h[1][i];
        d.G[i] = pp.lambda * d.u_y[i] / Ji - st.P[i] - 0.5 * d.H[i];
        const ThermoPoint tp = thermo_point(st.P[i], st.rho0()[i], Ji, pp);
        d.rho[i] = tp.rho;
        d.theta[i] = tp.theta_defined ? tp.theta : 0.0;
        d.s[i] = tp.s_defined ? tp.s : 0.0;
        d.s_defined[i] = tp.s_defined ? 1 : 0;
    }
    return d;
}

} // namespace lagmhd
