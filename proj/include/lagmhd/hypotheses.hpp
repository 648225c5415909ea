#pragma once

#include <cmath>
#include <map>
#include <string>

#include "lagmhd/derived.hpp"
#include "lagmhd/initial_data.hpp"
#include "lagmhd/operators.hpp"

namespace lagmhd {

/// Grid evaluation of the admissibility conditions on the initial data.
///
/// Finiteness of integrals over the whole line is not computable from samples
/// on a truncated domain, so each quantity is recomputed on a doubled domain
/// (same spacing) and judged by the relative change: stable (< 1%) means the
/// truncated value is trusted as a proxy for the infinite-domain one.
struct HypothesisReport {
    bool h1_ok = false;   // rho0 positive on the grid, bounded above
    bool h2_ok = false;   // base integrability of the data
    bool h3_ok = false;   // slow decay |rho0'| <= K1 rho0^{3/2} + weighted norms
    bool h4_ok = false;   // rho0, P0 integrable
    bool star_ok = false; // inf rho0 (1+|y|)^2 > 0
    double K1 = 0.0;      // sup |rho0'| / rho0^{3/2}
    double A0 = 0.0;      // inf rho0 (1+|y|)^2
    double rho_bar = 0.0; // sup rho0
    double alpha = 1.0;
    bool doubling_available = true;
    std::map<std::string, double> norms;          // values on the base domain
    std::map<std::string, double> doubling_ratio; // doubled-domain value / base value
};

namespace detail {

struct HypoNorms {
    std::map<std::string, double> vals;
    double K1 = 0.0;
    double A0 = 0.0;
    double rho_bar = 0.0;
};

inline HypoNorms hypothesis_norms(const InitialData& data, double alpha,
                                  const PhysParams& pp) {
    const Grid& g = data.geo->grid;
    const auto& rho0 = data.geo->rho0;
    const auto& drho0 = data.geo->drho0;
    const std::size_t n = g.N;

    HypoNorms out;
    for (std::size_t i = 0; i < n; ++i) {
        out.K1 = std::max(out.K1, std::abs(drho0[i]) / std::pow(rho0[i], 1.5));
        const double one_abs = 1.0 + std::abs(g.y[i]);
        const double a0 = rho0[i] * one_abs * one_abs;
        out.A0 = (i == 0) ? a0 : std::min(out.A0, a0);
        out.rho_bar = std::max(out.rho_bar, rho0[i]);
    }

    std::vector<double> unit(n, 1.0), sqrt_rho0(n), inv_rho0(n), w_alpha(n), abs_f(n);
    for (std::size_t i = 0; i < n; ++i) {
        sqrt_rho0[i] = std::sqrt(rho0[i]);
        inv_rho0[i] = 1.0 / rho0[i];
        w_alpha[i] = std::pow(rho0[i], -alpha);
    }

    State st = data.state();
    const DerivedFields d = derived_fields(st, pp);

    auto l1 = [&](const std::vector<double>& f) {
        for (std::size_t i = 0; i < n; ++i)
            abs_f[i] = std::abs(f[i]);
        return integrate(abs_f, g);
    };

    out.vals["l2_sqrt_rho0_u0"] = weighted_l2(data.u0, rho0, g);
    out.vals["l2_sqrt_rho0_w0"] = weighted_l2(data.w0[0], data.w0[1], rho0, g);
    out.vals["l2_du0"] = l2_norm(d.u_y, g);
    out.vals["l2_dw0"] = weighted_l2(d.w_y[0], d.w_y[1], unit, g);
    out.vals["l2_h0"] = weighted_l2(data.h0[0], data.h0[1], unit, g);
    out.vals["l2_P0"] = l2_norm(data.P0, g);
    const auto dP0 = ddy(data.P0, g);
    const auto dh0x = ddy(data.h0[0], g);
    const auto dh0y = ddy(data.h0[1], g);
    const auto dJ0 = ddy(data.J0, g);
    out.vals["l2_dP0_over_sqrt_rho0"] = weighted_l2(dP0, inv_rho0, g);
    out.vals["l2_dh0_over_sqrt_rho0"] = weighted_l2(dh0x, dh0y, inv_rho0, g);
    out.vals["l2_dJ0_over_sqrt_rho0"] = weighted_l2(dJ0, inv_rho0, g);

    out.vals["l2_walpha_F0"] = weighted_l2(d.F[0], d.F[1], w_alpha, g);
    out.vals["l2_walpha_G0"] = weighted_l2(d.G, w_alpha, g);
    out.vals["l2_walpha_H0"] = weighted_l2(d.H, w_alpha, g);
    out.vals["l2_walpha_h0"] = weighted_l2(data.h0[0], data.h0[1], w_alpha, g);

    // H1 norms of rho0^{-alpha/2} P0 and rho0^{-alpha/2} h0
    std::vector<double> wP(n), whx(n), why(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::pow(rho0[i], -0.5 * alpha);
        wP[i] = w * data.P0[i];
        whx[i] = w * data.h0[0][i];
        why[i] = w * data.h0[1][i];
    }
    const auto dwP = ddy(wP, g);
    const auto dwhx = ddy(whx, g);
    const auto dwhy = ddy(why, g);
    auto h1norm = [&](const std::vector<double>& f, const std::vector<double>& df) {
        const double a = l2_norm(f, g);
        const double b = l2_norm(df, g);
        return std::sqrt(a * a + b * b);
    };
    out.vals["h1_walpha_P0"] = h1norm(wP, dwP);
    out.vals["h1_walpha_h0"] = std::sqrt(
        h1norm(whx, dwhx) * h1norm(whx, dwhx) + h1norm(why, dwhy) * h1norm(why, dwhy));

    out.vals["l1_rho0"] = l1(rho0);
    out.vals["l1_P0"] = l1(data.P0);
    out.vals["K1"] = out.K1;
    return out;
}

} // namespace detail

struct HypothesisOptions {
    double stability_tol = 0.01; // doubled-domain change below this counts as stable
    BumpSet bumps;               // reused to rebuild the data on the doubled domain
    double s0 = 1.0;
};

/// Evaluates the admissibility flags for initial data built from a profile.
/// For power-law profiles the quantities are recomputed on [-2L, 2L] at the
/// same spacing; tabulated profiles cannot be extended, so their flags rest on
/// the base-domain values alone.
inline HypothesisReport validate_hypotheses(const DensityProfile& profile,
                                            const InitialData& data, double alpha,
                                            const PhysParams& pp,
                                            const HypothesisOptions& opt = {}) {
    const Grid& g = data.geo->grid;
    if (data.u0.size() != g.N || data.P0.size() != g.N)
        throw ValidationError("validate_hypotheses: data does not match the profile grid");

    HypothesisReport rep;
    rep.alpha = alpha;
    const auto base = detail::hypothesis_norms(data, alpha, pp);
    rep.norms = base.vals;
    rep.K1 = base.K1;
    rep.A0 = base.A0;
    rep.rho_bar = base.rho_bar;

    bool p0_nonneg = true;
    for (double p : data.P0)
        p0_nonneg = p0_nonneg && p >= 0.0;
    bool rho_pos = true;
    for (double r : data.geo->rho0)
        rho_pos = rho_pos && r > 0.0 && std::isfinite(r);

    rep.doubling_available = profile.kind == ProfileKind::PowerLaw;
    if (rep.doubling_available) {
        const Grid g2 = Grid::make(2.0 * g.L, 2 * (g.N - 1) + 1);
        const InitialData data2 = build_initial_data(profile, opt.bumps, pp, g2, opt.s0);
        const auto dbl = detail::hypothesis_norms(data2, alpha, pp);
        for (const auto& [k, v] : base.vals) {
            // both sides at zero (e.g. K1 of a constant profile) counts as stable
            if (std::abs(v) < 1e-300)
                rep.doubling_ratio[k] = std::abs(dbl.vals.at(k)) < 1e-300 ? 1.0 : HUGE_VAL;
            else
                rep.doubling_ratio[k] = dbl.vals.at(k) / v;
        }
    }

    auto finite = [&](const std::string& key) { return std::isfinite(rep.norms.at(key)); };
    // The slow-decay constant is the decisive proxy: its sup either saturates
    // (ell <= 2) or keeps growing with the domain. Slowly convergent integrals
    // would fail a 1% test while being perfectly finite, so the other norms
    // only contribute finiteness; their ratios are reported for inspection.
    bool k1_stable = true;
    if (rep.doubling_available) {
        const double r = rep.doubling_ratio.at("K1");
        k1_stable = std::isfinite(r) && std::abs(r - 1.0) < opt.stability_tol;
    }

    rep.h1_ok = rho_pos;
    rep.h2_ok = p0_nonneg && finite("l2_sqrt_rho0_u0") && finite("l2_sqrt_rho0_w0") &&
                finite("l2_du0") && finite("l2_dw0") && finite("l2_h0") && finite("l2_P0") &&
                finite("l2_dP0_over_sqrt_rho0") && finite("l2_dh0_over_sqrt_rho0");
    rep.h3_ok = k1_stable && finite("l2_walpha_F0") && finite("l2_walpha_G0") &&
                finite("l2_walpha_H0") && finite("h1_walpha_P0") && finite("h1_walpha_h0");
    rep.h4_ok = finite("l1_rho0") && finite("l1_P0");
    rep.star_ok = rep.A0 > 0.0;
    return rep;
}

} // namespace lagmhd
