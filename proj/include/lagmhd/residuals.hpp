#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lagmhd/derived.hpp"
#include "lagmhd/operators.hpp"

namespace lagmhd {

/// The five derived evolution identities checked offline on snapshot triples.
enum class IdentityKind { FEq, HEq, GEq, PEq, hEq };

inline const char* identity_name(IdentityKind k) {
    switch (k) {
    case IdentityKind::FEq: return "F-eq";
    case IdentityKind::HEq: return "H-eq";
    case IdentityKind::GEq: return "G-eq";
    case IdentityKind::PEq: return "P-eq";
    case IdentityKind::hEq: return "h-eq";
    }
    return "?";
}

struct IdentityResidual {
    IdentityKind which = IdentityKind::FEq;
    double l2 = 0.0;
    double linf = 0.0;
    double time = 0.0;
};

namespace detail {

// flux-form (f_y / rho0)_y, interior nodes only
inline std::vector<double> div_weighted_grad(const std::vector<double>& f,
                                             const std::vector<double>& rho0, const Grid& g) {
    const std::size_t n = g.N;
    std::vector<double> out(n, 0.0);
    const double inv = 1.0 / g.dy;
    auto face = [&](std::size_t i) {
        return (f[i + 1] - f[i]) * inv * 2.0 / (rho0[i] + rho0[i + 1]);
    };
    double left = face(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double right = face(i);
        out[i] = (right - left) * inv;
        left = right;
    }
    return out;
}

inline void require_uniform_triple(const State& a, const State& b, const State& c) {
    const double d1 = b.t - a.t;
    const double d2 = c.t - b.t;
    if (!(d1 > 0.0) || std::abs(d2 - d1) > 1e-10 * std::max(1.0, std::abs(d1)))
        throw ValidationError("identity_residual: states must be consecutive with equal spacing");
    if (a.n() != b.n() || b.n() != c.n())
        throw ValidationError("identity_residual: grid mismatch in trajectory");
}

} // namespace detail

/// Residual field of one identity at the middle time of a uniformly spaced
/// state triple. Time derivatives are central; spatial terms are evaluated on
/// the middle state. Only interior nodes (3 in from each wall) are meaningful.
inline std::vector<double> identity_residual_field(IdentityKind which, const State& sm,
                                                   const State& s0, const State& sp,
                                                   const PhysParams& pp) {
    detail::require_uniform_triple(sm, s0, sp);
    const Grid& g = s0.grid();
    const std::size_t n = g.N;
    const double inv2dt = 1.0 / (sp.t - sm.t);

    const DerivedFields dm = derived_fields(sm, pp);
    const DerivedFields d0 = derived_fields(s0, pp);
    const DerivedFields dp = derived_fields(sp, pp);

    std::vector<double> r(n, 0.0);
    const double gam = pp.gamma;

    switch (which) {
    case IdentityKind::FEq: {
        const auto lapx = detail::div_weighted_grad(d0.F[0], s0.rho0(), g);
        const auto lapy = detail::div_weighted_grad(d0.F[1], s0.rho0(), g);
        for (std::size_t i = 0; i < n; ++i) {
            const double J = s0.J[i];
            const double uyJ = d0.u_y[i] / J;
            const double rx = (dp.F[0][i] - dm.F[0][i]) * inv2dt - pp.mu / J * lapx[i] +
                              uyJ * d0.F[0][i] - d0.w_y[0][i] / J;
            const double ry = (dp.F[1][i] - dm.F[1][i]) * inv2dt - pp.mu / J * lapy[i] +
                              uyJ * d0.F[1][i] - d0.w_y[1][i] / J;
            r[i] = std::sqrt(rx * rx + ry * ry);
        }
        break;
    }
    case IdentityKind::HEq: {
        for (std::size_t i = 0; i < n; ++i) {
            const double H = d0.H[i];
            const double Fh = d0.F[0][i] * s0.h[0][i] + d0.F[1][i] * s0.h[1][i];
            r[i] = (dp.H[i] - dm.H[i]) * inv2dt + H * H / pp.lambda + 2.0 * H / pp.mu +
                   2.0 * H * s0.P[i] / pp.lambda - 2.0 / pp.mu * Fh +
                   2.0 * H * d0.G[i] / pp.lambda;
        }
        break;
    }
    case IdentityKind::GEq: {
        const auto lap = detail::div_weighted_grad(d0.G, s0.rho0(), g);
        for (std::size_t i = 0; i < n; ++i) {
            const double J = s0.J[i];
            const double uyJ = d0.u_y[i] / J;
            const double wy2 = (d0.w_y[0][i] * d0.w_y[0][i] + d0.w_y[1][i] * d0.w_y[1][i]) /
                               (J * J);
            const double hwy = (s0.h[0][i] * d0.w_y[0][i] + s0.h[1][i] * d0.w_y[1][i]) / J;
            r[i] = (dp.G[i] - dm.G[i]) * inv2dt - pp.lambda / J * lap[i] + gam * uyJ * d0.G[i] -
                   0.5 * (2.0 - gam) * d0.u_y[i] * d0.H[i] / J + (gam - 1.0) * pp.mu * wy2 +
                   hwy;
        }
        break;
    }
    case IdentityKind::PEq: {
        for (std::size_t i = 0; i < n; ++i) {
            const double G = d0.G[i];
            const double H = d0.H[i];
            const double q1 = s0.P[i] + 0.5 * (2.0 - gam) * G + 0.25 * (2.0 - gam) * H;
            const double q2 = G + 0.5 * H;
            const double fx = d0.F[0][i] - s0.h[0][i];
            const double fy = d0.F[1][i] - s0.h[1][i];
            r[i] = (sp.P[i] - sm.P[i]) * inv2dt + q1 * q1 / pp.lambda -
                   gam * gam / (4.0 * pp.lambda) * q2 * q2 -
                   (gam - 1.0) / pp.mu * (fx * fx + fy * fy);
        }
        break;
    }
    case IdentityKind::hEq: {
        for (std::size_t i = 0; i < n; ++i) {
            const double stress = (d0.G[i] + s0.P[i] + 0.5 * d0.H[i]) / pp.lambda;
            const double rx = (sp.h[0][i] - sm.h[0][i]) * inv2dt -
                              (d0.F[0][i] - s0.h[0][i]) / pp.mu + s0.h[0][i] * stress;
            const double ry = (sp.h[1][i] - sm.h[1][i]) * inv2dt -
                              (d0.F[1][i] - s0.h[1][i]) / pp.mu + s0.h[1][i] * stress;
            r[i] = std::sqrt(rx * rx + ry * ry);
        }
        break;
    }
    }
    return r;
}

/// Max nodewise defect of the algebraic implication between the H-equation
/// and the h-equation residuals: r_H - 2 h . r_h collapses to the mismatch of
/// the centered time differences of H and 2 h h_t, which is O(dt^2).
inline double heq_relation_defect(const State& sm, const State& s0, const State& sp,
                                  const PhysParams& pp) {
    detail::require_uniform_triple(sm, s0, sp);
    const std::size_t n = s0.n();
    const double inv2dt = 1.0 / (sp.t - sm.t);
    const DerivedFields dm = derived_fields(sm, pp);
    const DerivedFields d0 = derived_fields(s0, pp);
    const DerivedFields dp = derived_fields(sp, pp);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double H = d0.H[i];
        const double Fh = d0.F[0][i] * s0.h[0][i] + d0.F[1][i] * s0.h[1][i];
        const double rH = (dp.H[i] - dm.H[i]) * inv2dt + H * H / pp.lambda + 2.0 * H / pp.mu +
                          2.0 * H * s0.P[i] / pp.lambda - 2.0 / pp.mu * Fh +
                          2.0 * H * d0.G[i] / pp.lambda;
        const double stress = (d0.G[i] + s0.P[i] + 0.5 * H) / pp.lambda;
        double two_h_rh = 0.0;
        for (int c = 0; c < 2; ++c) {
            const double rc = (sp.h[c][i] - sm.h[c][i]) * inv2dt -
                              (d0.F[c][i] - s0.h[c][i]) / pp.mu + s0.h[c][i] * stress;
            two_h_rh += 2.0 * s0.h[c][i] * rc;
        }
        worst = std::max(worst, std::abs(rH - two_h_rh));
    }
    return worst;
}

/// Interior L2 and Linf of one identity residual (3 nodes dropped per wall,
/// where the one-sided stencils pollute second derivatives).
inline IdentityResidual identity_residual(IdentityKind which, const State& sm, const State& s0,
                                          const State& sp, const PhysParams& pp) {
    const auto r = identity_residual_field(which, sm, s0, sp, pp);
    const Grid& g = s0.grid();
    IdentityResidual out;
    out.which = which;
    out.time = s0.t;
    detail::CompensatedSum acc;
    const std::size_t lo = 3, hi = g.N - 3;
    for (std::size_t i = lo; i < hi; ++i) {
        acc.add(r[i] * r[i]);
        out.linf = std::max(out.linf, std::abs(r[i]));
    }
    out.l2 = std::sqrt(acc.value() * g.dy);
    return out;
}

} // namespace lagmhd
