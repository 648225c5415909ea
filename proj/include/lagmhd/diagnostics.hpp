#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lagmhd/derived.hpp"
#include "lagmhd/operators.hpp"
#include "lagmhd/state.hpp"

namespace lagmhd {

struct Conserved {
    double energy = 0.0;
    double mom_u = 0.0;
    double mom_w[2] = {0.0, 0.0};
};

/// Total energy (kinetic + magnetic + internal) and the two momenta.
inline Conserved conserved(const State& st, const PhysParams& pp) {
    const Grid& g = st.grid();
    const auto& rho0 = st.rho0();
    const std::size_t n = g.N;
    std::vector<double> e(n), mu_(n), mwx(n), mwy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w2 = st.w[0][i] * st.w[0][i] + st.w[1][i] * st.w[1][i];
        const double h2 = st.h[0][i] * st.h[0][i] + st.h[1][i] * st.h[1][i];
        e[i] = 0.5 * rho0[i] * st.u[i] * st.u[i] + 0.5 * rho0[i] * w2 +
               0.5 * st.J[i] * h2 + st.J[i] * st.P[i] / (pp.gamma - 1.0);
        mu_[i] = rho0[i] * st.u[i];
        mwx[i] = rho0[i] * st.w[0][i];
        mwy[i] = rho0[i] * st.w[1][i];
    }
    Conserved c;
    c.energy = integrate(e, g);
    c.mom_u = integrate(mu_, g);
    c.mom_w[0] = integrate(mwx, g);
    c.mom_w[1] = integrate(mwy, g);
    return c;
}

/// Startup lower bound for the Jacobian, exp(-(2 sqrt 2/lambda) sqrt(E0) |rho0|_1).
inline double jacobian_lower_bound(double E0, double rho0_l1, const PhysParams& pp) {
    return std::exp(-(2.0 * std::sqrt(2.0) / pp.lambda) * std::sqrt(E0) * rho0_l1);
}

struct JBoundCheck {
    double Jmin = 0.0;
    double J_bound = 0.0;
    bool ok = false;
};

inline JBoundCheck j_bound_check(const State& st, double E0, double rho0_l1,
                                 const PhysParams& pp) {
    JBoundCheck c;
    c.J_bound = jacobian_lower_bound(E0, rho0_l1, pp);
    c.Jmin = *std::min_element(st.J.begin(), st.J.end());
    c.ok = c.Jmin >= c.J_bound * (1.0 - 1e-6);
    return c;
}

/// Minimum nodewise increment of J^gamma P between two states; the continuum
/// quantity is nondecreasing, so negative values bound the scheme error.
inline double jgp_monotonicity(const State& prev, const State& cur, const PhysParams& pp) {
    if (prev.n() != cur.n())
        throw ValidationError("jgp_monotonicity: grid mismatch");
    double m = HUGE_VAL;
    for (std::size_t i = 0; i < cur.n(); ++i) {
        const double a = std::pow(prev.J[i], pp.gamma) * prev.P[i];
        const double b = std::pow(cur.J[i], pp.gamma) * cur.P[i];
        m = std::min(m, b - a);
    }
    return m;
}

struct WeightedNorms {
    double wF = 0.0, wG = 0.0, wH = 0.0, wh = 0.0; // norms with weight rho0^-alpha
    struct Regularized {
        double delta = 0.0;
        double qF = 0.0, qG = 0.0, qH = 0.0; // integrals with weight rho0 J / rho_delta^(alpha+1)
    };
    std::vector<Regularized> reg;
};

/// Singularly weighted flux norms plus their delta-regularized companions.
inline WeightedNorms weighted_norm_suite(const State& st, const DerivedFields& d, double alpha,
                                         const std::vector<double>& deltas) {
    if (!(alpha >= 0.0))
        throw ValidationError("weighted_norm_suite: alpha must be nonnegative");
    const Grid& g = st.grid();
    const auto& rho0 = st.rho0();
    const std::size_t n = g.N;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = std::pow(rho0[i], -alpha);
    WeightedNorms out;
    out.wF = weighted_l2(d.F[0], d.F[1], w, g);
    out.wG = weighted_l2(d.G, w, g);
    out.wH = weighted_l2(d.H, w, g);
    out.wh = weighted_l2(st.h[0], st.h[1], w, g);

    std::vector<double> q(n);
    for (double delta : deltas) {
        if (!(delta > 0.0))
            throw ValidationError("weighted_norm_suite: deltas must be positive");
        WeightedNorms::Regularized r;
        r.delta = delta;
        auto reg_integral = [&](auto&& value2) {
            for (std::size_t i = 0; i < n; ++i) {
                const double rd = rho0[i] + delta;
                q[i] = rho0[i] * st.J[i] * std::pow(rd, -(alpha + 1.0)) * value2(i);
            }
            return integrate(q, g);
        };
        r.qF = reg_integral(
            [&](std::size_t i) { return d.F[0][i] * d.F[0][i] + d.F[1][i] * d.F[1][i]; });
        r.qG = reg_integral([&](std::size_t i) { return d.G[i] * d.G[i]; });
        r.qH = reg_integral([&](std::size_t i) { return d.H[i] * d.H[i]; });
        out.reg.push_back(r);
    }
    return out;
}

struct H1Norms {
    double u = 0.0;
    double w = 0.0;
    double theta = 0.0;
    std::size_t theta_floored = 0; // nodes where theta was zeroed below the density floor
};

/// H1 norms of u, w, theta; theta is restricted to nodes with rho0 >= floor
/// (extended by zero below it).
inline H1Norms h1_norms(const State& st, const DerivedFields& d, double rho_floor) {
    const Grid& g = st.grid();
    const std::size_t n = g.N;
    H1Norms out;
    auto h1 = [&](const std::vector<double>& f) {
        const auto df = ddy(f, g);
        const double a = l2_norm(f, g);
        const double b = l2_norm(df, g);
        return std::sqrt(a * a + b * b);
    };
    out.u = h1(st.u);
    const double hwx = h1(st.w[0]);
    const double hwy = h1(st.w[1]);
    out.w = std::sqrt(hwx * hwx + hwy * hwy);
    std::vector<double> th(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (st.rho0()[i] >= rho_floor)
            th[i] = d.theta[i];
        else
            ++out.theta_floored;
    }
    out.theta = h1(th);
    return out;
}

struct EntropyExtrema {
    double s_sup = 0.0;
    double s_inf = 0.0;
    std::size_t counted = 0;
};

/// Entropy extrema over nodes with rho0 >= floor where s is defined.
inline EntropyExtrema entropy_extrema(const State& st, const DerivedFields& d,
                                      double rho_floor) {
    EntropyExtrema e;
    e.s_sup = -HUGE_VAL;
    e.s_inf = HUGE_VAL;
    for (std::size_t i = 0; i < st.n(); ++i) {
        if (st.rho0()[i] >= rho_floor && d.s_defined[i]) {
            e.s_sup = std::max(e.s_sup, d.s[i]);
            e.s_inf = std::min(e.s_inf, d.s[i]);
            ++e.counted;
        }
    }
    if (e.counted == 0) {
        e.s_sup = 0.0;
        e.s_inf = 0.0;
    }
    return e;
}

/// Informational Gagliardo-Nirenberg ratio |v|_inf^2 / (|v|_2 |v_y|_2) for
/// v = rho0^{-alpha/2} h; zero when the denominator vanishes.
inline double gn_ratio(const State& st, double alpha) {
    const Grid& g = st.grid();
    const std::size_t n = g.N;
    std::vector<double> vx(n), vy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::pow(st.rho0()[i], -0.5 * alpha);
        vx[i] = w * st.h[0][i];
        vy[i] = w * st.h[1][i];
    }
    double vinf = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        vinf = std::max(vinf, std::sqrt(vx[i] * vx[i] + vy[i] * vy[i]));
    const auto dvx = ddy(vx, g);
    const auto dvy = ddy(vy, g);
    std::vector<double> unit(n, 1.0);
    const double l2 = weighted_l2(vx, vy, unit, g);
    const double dl2 = weighted_l2(dvx, dvy, unit, g);
    const double denom = l2 * dl2;
    return denom > 0.0 ? vinf * vinf / denom : 0.0;
}

/// Offline flow-map/Jacobian consistency: max |ln J - (1/lambda) int (G+P+H/2) dtau|
/// over nodes and stored times for a uniformly spaced trajectory started at
/// J identically one.
inline double j_consistency(const std::vector<State>& traj,
                            const std::vector<DerivedFields>& derived,
                            const PhysParams& pp) {
    if (traj.size() < 2 || derived.size() != traj.size())
        throw ValidationError("j_consistency: need a trajectory with derived fields");
    const double dt0 = traj[1].t - traj[0].t;
    for (std::size_t k = 1; k < traj.size(); ++k)
        if (std::abs((traj[k].t - traj[k - 1].t) - dt0) > 1e-10 * std::max(1.0, std::abs(dt0)))
            throw ValidationError("j_consistency: trajectory times are not uniformly spaced");
    const std::size_t n = traj[0].n();
    std::vector<double> acc(n, 0.0);
    double worst = 0.0;
    auto integrand = [&](std::size_t k, std::size_t i) {
        return derived[k].G[i] + traj[k].P[i] + 0.5 * derived[k].H[i];
    };
    for (std::size_t k = 1; k < traj.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            acc[i] += 0.5 * dt0 * (integrand(k - 1, i) + integrand(k, i));
            const double defect = std::abs(std::log(traj[k].J[i]) - acc[i] / pp.lambda);
            worst = std::max(worst, defect);
        }
    }
    return worst;
}

/// Size of the difference of two same-grid states in the stability metric
/// int (J^2 + rho0 u^2 + rho0 |w|^2 + |h|^2 + P^2) dy.
inline double difference_functional(const State& a, const State& b) {
    if (a.n() != b.n() || a.geo->grid.L != b.geo->grid.L)
        throw ValidationError("difference_functional: grid mismatch");
    if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t)))
        throw ValidationError("difference_functional: states are at different times");
    // snapshot reloads recover rho0 as rho*J, so allow round-off discrepancy
    for (std::size_t i = 0; i < a.n(); ++i)
        if (std::abs(a.rho0()[i] - b.rho0()[i]) > 1e-12 * a.rho0()[i])
            throw ValidationError("difference_functional: density profiles differ");
    const Grid& g = a.grid();
    const std::size_t n = g.N;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dJ = a.J[i] - b.J[i];
        const double du = a.u[i] - b.u[i];
        const double dwx = a.w[0][i] - b.w[0][i];
        const double dwy = a.w[1][i] - b.w[1][i];
        const double dhx = a.h[0][i] - b.h[0][i];
        const double dhy = a.h[1][i] - b.h[1][i];
        const double dP = a.P[i] - b.P[i];
        q[i] = dJ * dJ + a.rho0()[i] * (du * du + dwx * dwx + dwy * dwy) + dhx * dhx +
               dhy * dhy + dP * dP;
    }
    return integrate(q, g);
}

/// One row of the diagnostics time series.
struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;
    double E0 = 0.0;
    double mom_u = 0.0;
    double mom_w[2] = {0.0, 0.0};
    double Jmin = 0.0;
    double Jmax = 0.0;
    double J_bound = 0.0;
    double jgp_min_inc = 0.0;
    double s_sup = 0.0;
    double s_inf = 0.0;
    WeightedNorms wnorms;
    H1Norms h1;
    double j_consistency = 0.0;
    double gn_ratio = 0.0;
};

} // namespace lagmhd
