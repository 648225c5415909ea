#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "lagmhd/profile.hpp"
#include "lagmhd/solver.hpp"
#include "lagmhd/state.hpp"

namespace lagmhd {

namespace mms {

/// Smooth compactly supported envelope exp(1 - 1/(1 - (y/Y)^2)) with closed
/// first and second derivatives.
struct Envelope {
    double Y = 0.75;

    double value(double y) const {
        const double s = y / Y;
        const double q = 1.0 - s * s;
        if (!(q > 0.0))
            return 0.0;
        return std::exp(1.0 - 1.0 / q);
    }
    double d1(double y) const {
        const double s = y / Y;
        const double q = 1.0 - s * s;
        if (!(q > 0.0))
            return 0.0;
        const double gpr = -(2.0 * s / Y) / (q * q);
        return value(y) * gpr;
    }
    double d2(double y) const {
        const double s = y / Y;
        const double q = 1.0 - s * s;
        if (!(q > 0.0))
            return 0.0;
        const double gpr = -(2.0 * s / Y) / (q * q);
        const double gpp = -(2.0 / (Y * Y)) * (1.0 + 3.0 * s * s) / (q * q * q);
        return value(y) * (gpr * gpr + gpp);
    }
};

/// One manufactured field c0 + A * E(y) trig(k y + py) * trig(om t + pt)
/// with exact derivatives in y (to second order) and t.
struct Field {
    double c0 = 0.0;
    double A = 0.0;
    Envelope env;
    double k = 1.0, py = 0.0;
    double om = 1.0, pt = 0.0;
    bool cos_y = false; // sin by default
    bool cos_t = true;

    double trig_y(double y) const { return cos_y ? std::cos(k * y + py) : std::sin(k * y + py); }
    double dtrig_y(double y) const {
        return cos_y ? -k * std::sin(k * y + py) : k * std::cos(k * y + py);
    }
    double tau(double t) const { return cos_t ? std::cos(om * t + pt) : std::sin(om * t + pt); }
    double dtau(double t) const {
        return cos_t ? -om * std::sin(om * t + pt) : om * std::cos(om * t + pt);
    }

    // spatial profile s(y) = E(y) trig_y and its derivatives
    double sp(double y) const { return env.value(y) * trig_y(y); }
    double sp1(double y) const { return env.d1(y) * trig_y(y) + env.value(y) * dtrig_y(y); }
    double sp2(double y) const {
        return env.d2(y) * trig_y(y) + 2.0 * env.d1(y) * dtrig_y(y) -
               k * k * env.value(y) * trig_y(y);
    }

    double value(double y, double t) const { return c0 + A * sp(y) * tau(t); }
    double dt(double y, double t) const { return A * sp(y) * dtau(t); }
    double dy(double y, double t) const { return A * sp1(y) * tau(t); }
    double dyy(double y, double t) const { return A * sp2(y) * tau(t); }
};

} // namespace mms

/// Closed-form fields (J, u, w, h, P)(y, t) with the defect of each governing
/// equation available as source arrays.
struct ManufacturedSolution {
    mms::Field J, u, wx, wy, hx, hy, P;

    State sample(double t, std::shared_ptr<const GridDensity> geo) const {
        const Grid& g = geo->grid;
        State st;
        st.t = t;
        st.geo = geo;
        const std::size_t n = g.N;
        st.J.resize(n);
        st.u.resize(n);
        st.w[0].resize(n);
        st.w[1].resize(n);
        st.h[0].resize(n);
        st.h[1].resize(n);
        st.P.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = g.y[i];
            st.J[i] = J.value(y, t);
            if (!(st.J[i] > 0.0))
                throw ValidationError("ManufacturedSolution: J must stay positive");
            st.u[i] = u.value(y, t);
            st.w[0][i] = wx.value(y, t);
            st.w[1][i] = wy.value(y, t);
            st.h[0][i] = hx.value(y, t);
            st.h[1][i] = hy.value(y, t);
            st.P[i] = P.value(y, t);
        }
        return st;
    }

    /// Equation defects at (y, t): what must be added to each equation's right
    /// side so the manufactured fields solve the system exactly.
    void sources(double t, const GridDensity& geo, std::vector<double>& sJ,
                 std::vector<double>& su, Vec2Field& sw, Vec2Field& sh,
                 std::vector<double>& sP, const PhysParams& pp) const {
        const Grid& g = geo.grid;
        const std::size_t n = g.N;
        sJ.resize(n);
        su.resize(n);
        sw[0].resize(n);
        sw[1].resize(n);
        sh[0].resize(n);
        sh[1].resize(n);
        sP.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = g.y[i];
            const double rho0 = geo.rho0[i];
            const double Jv = J.value(y, t), Jy = J.dy(y, t), Jt = J.dt(y, t);
            const double uy = u.dy(y, t), uyy = u.dyy(y, t), ut = u.dt(y, t);
            const double wxy = wx.dy(y, t), wxyy = wx.dyy(y, t), wxt = wx.dt(y, t);
            const double wyy_ = wy.dy(y, t), wyyy = wy.dyy(y, t), wyt = wy.dt(y, t);
            const double hxv = hx.value(y, t), hxy = hx.dy(y, t), hxt = hx.dt(y, t);
            const double hyv = hy.value(y, t), hyy = hy.dy(y, t), hyt = hy.dt(y, t);
            const double Pv = P.value(y, t), Py = P.dy(y, t), Pt = P.dt(y, t);

            auto visc_div = [&](double fy, double fyy) { return fyy / Jv - fy * Jy / (Jv * Jv); };

            sJ[i] = Jt - uy;
            su[i] = rho0 * ut - pp.lambda * visc_div(uy, uyy) + Py + hxv * hxy + hyv * hyy;
            sw[0][i] = rho0 * wxt - pp.mu * visc_div(wxy, wxyy) - hxy;
            sw[1][i] = rho0 * wyt - pp.mu * visc_div(wyy_, wyyy) - hyy;
            sh[0][i] = hxt + uy / Jv * hxv - wxy / Jv;
            sh[1][i] = hyt + uy / Jv * hyv - wyy_ / Jv;
            const double uyJ = uy / Jv;
            sP[i] = Pt + pp.gamma * uyJ * Pv -
                    (pp.gamma - 1.0) *
                        (pp.lambda * uyJ * uyJ + pp.mu * (wxy * wxy + wyy_ * wyy_) / (Jv * Jv));
        }
    }
};

/// Grid-resident source evaluator. The y-profiles of every field are sampled
/// once at construction, so a per-stage evaluation costs a few multiplies per
/// node and two scalar trig calls per field.
class MmsSource final : public SourceTerm {
public:
    MmsSource(ManufacturedSolution sol, std::shared_ptr<const GridDensity> geo, PhysParams pp)
        : sol_(std::move(sol)), geo_(std::move(geo)), pp_(pp) {
        const Grid& g = geo_->grid;
        auto fill = [&](const mms::Field& f, Profile& p) {
            p.src = f;
            p.sp.resize(g.N);
            p.sp1.resize(g.N);
            p.sp2.resize(g.N);
            for (std::size_t i = 0; i < g.N; ++i) {
                p.sp[i] = f.sp(g.y[i]);
                p.sp1[i] = f.sp1(g.y[i]);
                p.sp2[i] = f.sp2(g.y[i]);
            }
        };
        fill(sol_.J, J_);
        fill(sol_.u, u_);
        fill(sol_.wx, wx_);
        fill(sol_.wy, wy_);
        fill(sol_.hx, hx_);
        fill(sol_.hy, hy_);
        fill(sol_.P, P_);
    }

    void eval(double t, std::vector<double>& sJ, std::vector<double>& su, Vec2Field& sw,
              Vec2Field& sh, std::vector<double>& sP) const override {
        const Grid& g = geo_->grid;
        const std::size_t n = g.N;
        sJ.resize(n);
        su.resize(n);
        sw[0].resize(n);
        sw[1].resize(n);
        sh[0].resize(n);
        sh[1].resize(n);
        sP.resize(n);
        const Scal J = J_.at(t), u = u_.at(t), wx = wx_.at(t), wy = wy_.at(t), hx = hx_.at(t),
                   hy = hy_.at(t), P = P_.at(t);
        const auto& rho0 = geo_->rho0;
        for (std::size_t i = 0; i < n; ++i) {
            const double Jv = J_.v(i, J), Jy = J_.dy(i, J), Jt = J_.dt(i, J);
            const double uy = u_.dy(i, u), uyy = u_.dyy(i, u), ut = u_.dt(i, u);
            const double wxy = wx_.dy(i, wx), wxyy = wx_.dyy(i, wx), wxt = wx_.dt(i, wx);
            const double wyy_ = wy_.dy(i, wy), wyyy = wy_.dyy(i, wy), wyt = wy_.dt(i, wy);
            const double hxv = hx_.v(i, hx), hxy = hx_.dy(i, hx), hxt = hx_.dt(i, hx);
            const double hyv = hy_.v(i, hy), hyy = hy_.dy(i, hy), hyt = hy_.dt(i, hy);
            const double Pv = P_.v(i, P), Py = P_.dy(i, P), Pt = P_.dt(i, P);

            auto visc_div = [&](double fy, double fyy) { return fyy / Jv - fy * Jy / (Jv * Jv); };
            sJ[i] = Jt - uy;
            su[i] = rho0[i] * ut - pp_.lambda * visc_div(uy, uyy) + Py + hxv * hxy + hyv * hyy;
            sw[0][i] = rho0[i] * wxt - pp_.mu * visc_div(wxy, wxyy) - hxy;
            sw[1][i] = rho0[i] * wyt - pp_.mu * visc_div(wyy_, wyyy) - hyy;
            sh[0][i] = hxt + uy / Jv * hxv - wxy / Jv;
            sh[1][i] = hyt + uy / Jv * hyv - wyy_ / Jv;
            const double uyJ = uy / Jv;
            sP[i] = Pt + pp_.gamma * uyJ * Pv -
                    (pp_.gamma - 1.0) *
                        (pp_.lambda * uyJ * uyJ + pp_.mu * (wxy * wxy + wyy_ * wyy_) / (Jv * Jv));
        }
    }

    const ManufacturedSolution& solution() const { return sol_; }

private:
    struct Scal {
        double tau, dtau;
    };
    struct Profile {
        mms::Field src; // by value so copies of the source stay self-contained
        std::vector<double> sp, sp1, sp2;
        Scal at(double t) const { return {src.tau(t), src.dtau(t)}; }
        double v(std::size_t i, Scal s) const { return src.c0 + src.A * sp[i] * s.tau; }
        double dy(std::size_t i, Scal s) const { return src.A * sp1[i] * s.tau; }
        double dyy(std::size_t i, Scal s) const { return src.A * sp2[i] * s.tau; }
        double dt(std::size_t i, Scal s) const { return src.A * sp[i] * s.dtau; }
    };

    ManufacturedSolution sol_;
    std::shared_ptr<const GridDensity> geo_;
    PhysParams pp_;
    Profile J_, u_, wx_, wy_, hx_, hy_, P_;
};

/// Default manufactured family: gentle envelope-localized waves, positive J
/// and P, fields vanishing identically near the walls so pinned boundary
/// values are exact.
inline ManufacturedSolution default_manufactured(double L) {
    const double Y = 0.75 * L;
    ManufacturedSolution m;
    auto f = [&](double c0, double A, double k, double py, double om, double pt, bool cy,
                 bool ct) {
        mms::Field fld;
        fld.c0 = c0;
        fld.A = A;
        fld.env.Y = Y;
        fld.k = k;
        fld.py = py;
        fld.om = om;
        fld.pt = pt;
        fld.cos_y = cy;
        fld.cos_t = ct;
        return fld;
    };
    const double s = 1.0 / L; // keep a similar number of waves on any domain
    m.J = f(1.0, 0.10, 2.0 * s, 0.3, 1.0, 0.0, false, true);
    m.u = f(0.0, 0.15, 3.0 * s, 0.0, 1.3, 0.0, false, true);
    m.wx = f(0.0, 0.10, 2.0 * s, 0.0, 1.1, 0.2, true, false);
    m.wy = f(0.0, 0.08, 1.7 * s, 0.5, 0.9, 0.0, false, true);
    m.hx = f(0.0, 0.12, 1.9 * s, 0.0, 1.2, 0.1, true, true);
    m.hy = f(0.0, 0.10, 2.3 * s, 0.4, 0.8, 0.0, false, false);
    m.P = f(0.5, 0.20, 1.5 * s, 0.0, 1.0, 0.0, true, true);
    return m;
}

} // namespace lagmhd
