#pragma once

#include <cmath>
#include <vector>

#include "lagmhd/operators.hpp"
#include "lagmhd/state.hpp"

namespace lagmhd {

/// Flow map eta(y, t) reconstructed from a stored trajectory by
/// trapezoid-in-time integration of the velocity, with the consistency
/// defect max |d eta/dy - J| reported per stored time.
struct FlowMap {
    std::vector<double> times;
    std::vector<std::vector<double>> eta;
    std::vector<double> defect;
};

inline FlowMap flow_map(const std::vector<State>& traj) {
    if (traj.empty())
        throw ValidationError("flow_map: empty trajectory");
    const Grid& g = traj[0].grid();
    const std::size_t n = g.N;
    if (traj.size() > 1) {
        const double d0 = traj[1].t - traj[0].t;
        for (std::size_t k = 1; k < traj.size(); ++k)
            if (std::abs((traj[k].t - traj[k - 1].t) - d0) >
                1e-10 * std::max(1.0, std::abs(d0)))
                throw ValidationError("flow_map: trajectory times are not uniformly spaced");
    }

    FlowMap fm;
    std::vector<double> eta = g.y; // eta(y, 0) = y exactly
    auto push = [&](const State& st) {
        for (std::size_t i = 1; i < n; ++i)
            if (!(eta[i] > eta[i - 1]))
                throw NumericalError("flow_map: eta not strictly increasing (particle crossing)",
                                     i, st.t);
        const auto deta = ddy(eta, g);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(deta[i] - st.J[i]));
        fm.times.push_back(st.t);
        fm.eta.push_back(eta);
        fm.defect.push_back(worst);
    };

    push(traj[0]);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double dt = traj[k].t - traj[k - 1].t;
        for (std::size_t i = 0; i < n; ++i)
            eta[i] += 0.5 * dt * (traj[k - 1].u[i] + traj[k].u[i]);
        push(traj[k]);
    }
    return fm;
}

/// Lagrangian fields resampled at fixed laboratory positions.
struct EulerianFields {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> rho;
    std::vector<double> u;
    Vec2Field w;
    Vec2Field h;
    std::vector<double> P;
    std::vector<double> J;
};

/// Monotone piecewise-linear inversion of eta followed by linear sampling of
/// the fields. Every x must lie inside [eta(-L), eta(L)].
inline EulerianFields to_eulerian(const State& st, const std::vector<double>& eta,
                                  const std::vector<double>& xgrid) {
    const Grid& g = st.grid();
    const std::size_t n = g.N;
    if (eta.size() != n)
        throw ValidationError("to_eulerian: eta length does not match grid");
    for (std::size_t i = 1; i < n; ++i)
        if (!(eta[i] > eta[i - 1]))
            throw NumericalError("to_eulerian: eta not strictly increasing", i, st.t);

    EulerianFields ef;
    ef.t = st.t;
    ef.x = xgrid;
    const std::size_t m = xgrid.size();
    ef.rho.resize(m);
    ef.u.resize(m);
    ef.w[0].resize(m);
    ef.w[1].resize(m);
    ef.h[0].resize(m);
    ef.h[1].resize(m);
    ef.P.resize(m);
    ef.J.resize(m);

    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i)
        rho[i] = st.rho0()[i] / st.J[i];

    std::size_t lo = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const double x = xgrid[j];
        if (x < eta.front() || x > eta.back())
            throw ValidationError("to_eulerian: x outside the image of eta");
        if (x < eta[lo])
            lo = 0;
        while (lo + 2 < n && eta[lo + 1] < x)
            ++lo;
        const double s = (x - eta[lo]) / (eta[lo + 1] - eta[lo]);
        auto lerp = [&](const std::vector<double>& f) {
            return f[lo] + s * (f[lo + 1] - f[lo]);
        };
        ef.rho[j] = lerp(rho);
        ef.u[j] = lerp(st.u);
        ef.w[0][j] = lerp(st.w[0]);
        ef.w[1][j] = lerp(st.w[1]);
        ef.h[0][j] = lerp(st.h[0]);
        ef.h[1][j] = lerp(st.h[1]);
        ef.P[j] = lerp(st.P);
        ef.J[j] = lerp(st.J);
    }
    return ef;
}

} // namespace lagmhd
