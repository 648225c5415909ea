#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "lagmhd/core.hpp"
#include "lagmhd/operators.hpp"
#include "lagmhd/state.hpp"
#include "lagmhd/tridiag.hpp"

namespace lagmhd {

enum class Scheme { ImexEuler, ExplicitRk2 };

/// Wall treatment at y = +-L.
///   DirichletUW: u = w = 0 pinned at the walls (default).
///   NeumannUW:   zero viscous stress at the outer faces; wall nodes are
///                half-cells and their pointwise u_y/w_y are taken as 0, so
///                the closed box transmits no momentum through the walls.
///   Dilation:    u pinned to +-a L, w = 0; admits the exact dilation flow.
enum class BcKind { DirichletUW, NeumannUW, Dilation };

struct Bc {
    BcKind kind = BcKind::DirichletUW;
    double dilation_rate = 0.0;
};

struct SolverConfig {
    Scheme scheme = Scheme::ImexEuler;
    double cfl = 0.4;
    double dt_max = 1e-3;
    double J_floor = 1e-300; // caller sets from the startup bound
    Bc bc;
    double T_end = 1.0;
    std::size_t output_every = 1;

    void validate() const {
        if (!(cfl > 0.0) || cfl > 1.0) throw ValidationError("SolverConfig: cfl must be in (0,1]");
        if (!(dt_max > 0.0)) throw ValidationError("SolverConfig: dt_max must be positive");
        if (!(J_floor > 0.0)) throw ValidationError("SolverConfig: J_floor must be positive");
        if (!(T_end >= 0.0)) throw ValidationError("SolverConfig: T_end must be nonnegative");
        if (output_every == 0) throw ValidationError("SolverConfig: output_every must be positive");
    }
};

/// Externally supplied defect terms, one per equation, sampled on the grid at
/// a requested time. Used by manufactured-solution runs.
class SourceTerm {
public:
    virtual ~SourceTerm() = default;
    // Each array has grid size; the values are added to the corresponding
    // equation exactly as written (the u source carries a rho0 u_t scaling).
    virtual void eval(double t, std::vector<double>& sJ, std::vector<double>& su,
                      Vec2Field& sw, Vec2Field& sh, std::vector<double>& sP) const = 0;
};

/// Largest stable/accurate step for the current state.
/// Explicit scheme: the diffusion limit dy^2 rho0 J / (2 max(lambda, mu))
/// against the advective rate |u_y/J|. IMEX: the advective and pressure
/// relaxation rates only (diffusion is implicit), capped by dt_max.
inline double stable_dt(const State& st, const SolverConfig& cfg, const PhysParams& pp) {
    const Grid& g = st.grid();
    const std::size_t n = g.N;
    if (n == 0 || st.u.size() != n)
        throw ValidationError("stable_dt: empty or inconsistent state");
    constexpr double eps = 1e-30;
    const double inv2 = 1.0 / (2.0 * g.dy);
    auto uy_at = [&](std::size_t i) {
        if (i == 0)
            return (-3.0 * st.u[0] + 4.0 * st.u[1] - st.u[2]) * inv2;
        if (i == n - 1)
            return (3.0 * st.u[n - 1] - 4.0 * st.u[n - 2] + st.u[n - 3]) * inv2;
        return (st.u[i + 1] - st.u[i - 1]) * inv2;
    };
    double dt = cfg.dt_max;
    if (cfg.scheme == Scheme::ExplicitRk2) {
        const double cdiff = g.dy * g.dy / (2.0 * std::max(pp.lambda, pp.mu));
        double min_rhoJ = HUGE_VAL, max_rate = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            min_rhoJ = std::min(min_rhoJ, st.rho0()[i] * st.J[i]);
            max_rate = std::max(max_rate, std::abs((st.u[i + 1] - st.u[i - 1]) * inv2) / st.J[i]);
        }
        for (std::size_t i : {std::size_t{0}, n - 1}) {
            min_rhoJ = std::min(min_rhoJ, st.rho0()[i] * st.J[i]);
            max_rate = std::max(max_rate, std::abs(uy_at(i)) / st.J[i]);
        }
        dt = std::min(dt, cfg.cfl * std::min(cdiff * min_rhoJ, 1.0 / (max_rate + eps)));
    } else {
        double max_rate = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            max_rate = std::max(max_rate,
                                std::abs(uy_at(i)) / st.J[i] + pp.gamma * st.P[i] / pp.lambda);
        dt = std::min(dt, cfg.cfl / (max_rate + eps));
    }
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw NumericalError("stable_dt: no positive stable step");
    return dt;
}

namespace detail {

/// Derivative used by the pointwise J/h/P updates: central inside,
/// bc-dependent at the wall nodes.
inline void ddy_bc(const std::vector<double>& f, const Grid& g, const Bc& bc,
                   std::vector<double>& out) {
    const std::size_t n = g.N;
    out.resize(n);
    const double inv2 = 1.0 / (2.0 * g.dy);
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = (f[i + 1] - f[i - 1]) * inv2;
    if (bc.kind == BcKind::NeumannUW) {
        out[0] = 0.0;
        out[n - 1] = 0.0;
    } else {
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
        out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
    }
}

/// Conservative gradient D(face-avg q): central differences inside, half-cell
/// closures at the walls (neumann mode only; pinned modes never use the wall
/// entries).
inline void flux_grad(const std::vector<double>& q, const Grid& g, std::vector<double>& out) {
    const std::size_t n = g.N;
    out.resize(n);
    const double inv2 = 1.0 / (2.0 * g.dy);
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = (q[i + 1] - q[i - 1]) * inv2;
    out[0] = (q[1] - q[0]) / g.dy;
    out[n - 1] = (q[n - 1] - q[n - 2]) / g.dy;
}

// Hot per-node kernels. GCC honors __restrict__ reliably only on function
// parameters, so every pass of the explicit right side lives in a flat
// free function that the vectorizer can handle.
inline void pass_recip(std::size_t n, const double* __restrict__ J,
                       double* __restrict__ invJ) {
    for (std::size_t i = 0; i < n; ++i)
        invJ[i] = 1.0 / J[i];
}

inline void pass_deriv(std::size_t n, double inv2, const double* __restrict__ u,
                       const double* __restrict__ wx, const double* __restrict__ wy,
                       double* __restrict__ uy, double* __restrict__ wxy,
                       double* __restrict__ wyy) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
        uy[i] = (u[i + 1] - u[i - 1]) * inv2;
        wxy[i] = (wx[i + 1] - wx[i - 1]) * inv2;
        wyy[i] = (wy[i + 1] - wy[i - 1]) * inv2;
    }
}

inline void pass_stress(std::size_t n, const double* __restrict__ P,
                        const double* __restrict__ hx, const double* __restrict__ hy,
                        double* __restrict__ q) {
    for (std::size_t i = 0; i < n; ++i)
        q[i] = P[i] + 0.5 * (hx[i] * hx[i] + hy[i] * hy[i]);
}

inline void pass_faces(std::size_t n, double inv_dy, double lambda, double mu,
                       const double* __restrict__ u, const double* __restrict__ wx,
                       const double* __restrict__ wy, const double* __restrict__ hx,
                       const double* __restrict__ hy, const double* __restrict__ J,
                       const double* __restrict__ q, double* __restrict__ fu,
                       double* __restrict__ fwx, double* __restrict__ fwy,
                       double* __restrict__ aq, double* __restrict__ ahx,
                       double* __restrict__ ahy) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double c = 2.0 * inv_dy / (J[i] + J[i + 1]);
        fu[i] = lambda * (u[i + 1] - u[i]) * c;
        fwx[i] = mu * (wx[i + 1] - wx[i]) * c;
        fwy[i] = mu * (wy[i + 1] - wy[i]) * c;
        aq[i] = 0.5 * (q[i] + q[i + 1]);
        ahx[i] = 0.5 * (hx[i] + hx[i + 1]);
        ahy[i] = 0.5 * (hy[i] + hy[i + 1]);
    }
}

inline void pass_momentum(std::size_t n, double inv_dy, const double* __restrict__ fu,
                          const double* __restrict__ fwx, const double* __restrict__ fwy,
                          const double* __restrict__ aq, const double* __restrict__ ahx,
                          const double* __restrict__ ahy, const double* __restrict__ ir,
                          double* __restrict__ ku, double* __restrict__ kwx,
                          double* __restrict__ kwy) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
        ku[i] = ((fu[i] - fu[i - 1]) - (aq[i] - aq[i - 1])) * inv_dy * ir[i];
        kwx[i] = ((fwx[i] - fwx[i - 1]) + (ahx[i] - ahx[i - 1])) * inv_dy * ir[i];
        kwy[i] = ((fwy[i] - fwy[i - 1]) + (ahy[i] - ahy[i - 1])) * inv_dy * ir[i];
    }
}

inline void pass_pointwise(std::size_t n, double gamma, double gm1, double lambda, double mu,
                           const double* __restrict__ uy, const double* __restrict__ wxy,
                           const double* __restrict__ wyy, const double* __restrict__ invJ,
                           const double* __restrict__ P, const double* __restrict__ hx,
                           const double* __restrict__ hy, double* __restrict__ kJ,
                           double* __restrict__ khx, double* __restrict__ khy,
                           double* __restrict__ kP) {
    for (std::size_t i = 0; i < n; ++i) {
        const double uyJ = uy[i] * invJ[i];
        kJ[i] = uy[i];
        khx[i] = (wxy[i] - uy[i] * hx[i]) * invJ[i];
        khy[i] = (wyy[i] - uy[i] * hy[i]) * invJ[i];
        const double wy2 = (wxy[i] * wxy[i] + wyy[i] * wyy[i]) * (invJ[i] * invJ[i]);
        kP[i] = -gamma * uyJ * P[i] + gm1 * (lambda * uyJ * uyJ + mu * wy2);
    }
}

/// Fused whole-stage kernel for the source-free explicit path: derivatives,
/// face fluxes, and every equation's right side evaluated in one sweep, with
/// the Heun stage combination applied on the fly. Mode 0 writes
/// out = in + dt k (predictor); mode 1 writes out = (out + in + dt k)/2
/// (corrector). Interior nodes only; the caller patches the wall rows with
/// the same formulas. Face expressions are written identically for the left
/// and right neighbor so flux telescoping cancels bitwise.
/// Returns the minimum updated J over the interior.
template <int Mode>
inline double pass_stage_fused(std::size_t n, double inv_dy, double dt, double lambda,
                               double mu, double gamma,
                               const double* __restrict__ u, const double* __restrict__ wx,
                               const double* __restrict__ wy, const double* __restrict__ hx,
                               const double* __restrict__ hy, const double* __restrict__ J,
                               const double* __restrict__ P, const double* __restrict__ ir,
                               double* __restrict__ ou, double* __restrict__ owx,
                               double* __restrict__ owy, double* __restrict__ ohx,
                               double* __restrict__ ohy, double* __restrict__ oJ,
                               double* __restrict__ oP) {
    const double inv2 = 0.5 * inv_dy;
    const double gm1 = gamma - 1.0;
    double minJ = HUGE_VAL;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double invJ = 1.0 / J[i];
        const double uy = (u[i + 1] - u[i - 1]) * inv2;
        const double wxy = (wx[i + 1] - wx[i - 1]) * inv2;
        const double wyy = (wy[i + 1] - wy[i - 1]) * inv2;

        const double cl = 2.0 * inv_dy / (J[i - 1] + J[i]);
        const double cr = 2.0 * inv_dy / (J[i] + J[i + 1]);
        const double qm = P[i - 1] + 0.5 * (hx[i - 1] * hx[i - 1] + hy[i - 1] * hy[i - 1]);
        const double qc = P[i] + 0.5 * (hx[i] * hx[i] + hy[i] * hy[i]);
        const double qp = P[i + 1] + 0.5 * (hx[i + 1] * hx[i + 1] + hy[i + 1] * hy[i + 1]);

        const double ku = ((lambda * (u[i + 1] - u[i]) * cr - lambda * (u[i] - u[i - 1]) * cl) -
                           (0.5 * (qc + qp) - 0.5 * (qm + qc))) *
                          inv_dy * ir[i];
        const double kwx =
            ((mu * (wx[i + 1] - wx[i]) * cr - mu * (wx[i] - wx[i - 1]) * cl) +
             (0.5 * (hx[i] + hx[i + 1]) - 0.5 * (hx[i - 1] + hx[i]))) *
            inv_dy * ir[i];
        const double kwy =
            ((mu * (wy[i + 1] - wy[i]) * cr - mu * (wy[i] - wy[i - 1]) * cl) +
             (0.5 * (hy[i] + hy[i + 1]) - 0.5 * (hy[i - 1] + hy[i]))) *
            inv_dy * ir[i];

        const double uyJ = uy * invJ;
        const double khx = (wxy - uy * hx[i]) * invJ;
        const double khy = (wyy - uy * hy[i]) * invJ;
        const double wy2 = (wxy * wxy + wyy * wyy) * (invJ * invJ);
        const double kP = -gamma * uyJ * P[i] + gm1 * (lambda * uyJ * uyJ + mu * wy2);

        if constexpr (Mode == 0) {
            ou[i] = u[i] + dt * ku;
            owx[i] = wx[i] + dt * kwx;
            owy[i] = wy[i] + dt * kwy;
            ohx[i] = hx[i] + dt * khx;
            ohy[i] = hy[i] + dt * khy;
            oJ[i] = J[i] + dt * uy;
            oP[i] = P[i] + dt * kP;
        } else {
            ou[i] = 0.5 * (ou[i] + u[i] + dt * ku);
            owx[i] = 0.5 * (owx[i] + wx[i] + dt * kwx);
            owy[i] = 0.5 * (owy[i] + wy[i] + dt * kwy);
            ohx[i] = 0.5 * (ohx[i] + hx[i] + dt * khx);
            ohy[i] = 0.5 * (ohy[i] + hy[i] + dt * khy);
            oJ[i] = 0.5 * (oJ[i] + J[i] + dt * uy);
            oP[i] = 0.5 * (oP[i] + P[i] + dt * kP);
        }
        minJ = std::min(minJ, oJ[i]);
    }
    return minJ;
}

inline void pass_axpy(std::size_t n, double dt, const double* __restrict__ base,
                      const double* __restrict__ k, double* __restrict__ out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = base[i] + dt * k[i];
}

// st <- (st + pred + dt k)/2, the trapezoidal half of Heun
inline void pass_combine(std::size_t n, double dt, const double* __restrict__ pred,
                         const double* __restrict__ k, double* __restrict__ st) {
    for (std::size_t i = 0; i < n; ++i)
        st[i] = 0.5 * (st[i] + pred[i] + dt * k[i]);
}

inline void pass_add_scaled(std::size_t n, const double* __restrict__ src,
                            const double* __restrict__ scale, double* __restrict__ k) {
    for (std::size_t i = 0; i < n; ++i)
        k[i] += src[i] * scale[i];
}

inline void pass_add(std::size_t n, const double* __restrict__ src, double* __restrict__ k) {
    for (std::size_t i = 0; i < n; ++i)
        k[i] += src[i];
}

struct StepWorkspace {
    std::vector<double> uy, wxy, wyy, Hbuf, grad, lo, di, up, rhs, tmp;
    std::vector<double> sJ, su, sP;
    Vec2Field sw, sh;
    bool have_sources = false;
    // explicit-path scratch: reciprocals, face quantities, slope buffers
    std::vector<double> invJ, invrho0, q, fu, fwx, fwy, aq, ahx, ahy;
    std::vector<double> kJ, ku, kwx, kwy, khx, khy, kP;
    const double* invrho0_src = nullptr;

    void ensure(std::size_t n) {
        if (uy.size() == n)
            return;
        for (auto* v : {&uy, &wxy, &wyy, &Hbuf, &grad, &lo, &di, &up, &rhs, &tmp, &sJ, &su,
                        &sP, &invJ, &invrho0, &q, &fu, &fwx, &fwy, &aq, &ahx, &ahy, &kJ, &ku,
                        &kwx, &kwy, &khx, &khy, &kP})
            v->resize(n);
        for (auto* v : {&sw[0], &sw[1], &sh[0], &sh[1]})
            v->resize(n);
        invrho0_src = nullptr;
    }

    void cache_invrho0(const std::vector<double>& rho0) {
        if (invrho0_src == rho0.data())
            return;
        for (std::size_t i = 0; i < rho0.size(); ++i)
            invrho0[i] = 1.0 / rho0[i];
        invrho0_src = rho0.data();
    }
};

/// Backward-Euler viscous solve rho0 v* = rho0 v + dt coeff (v*_y/J)_y with the
/// requested wall treatment; J is frozen at the current level.
inline void implicit_viscous(const std::vector<double>& v, const std::vector<double>& J,
                             const std::vector<double>& rho0, double coeff, double dt,
                             const Grid& g, const Bc& bc, double bc_lo, double bc_hi,
                             StepWorkspace& ws, std::vector<double>& out) {
    const std::size_t n = g.N;
    const double r = coeff * dt / (g.dy * g.dy);
    // face conductances r / J_face
    auto cface = [&](std::size_t i) { return 2.0 * r / (J[i] + J[i + 1]); };
    ws.lo.assign(n, 0.0);
    ws.up.assign(n, 0.0);
    ws.di.assign(n, 1.0);
    ws.rhs.assign(n, 0.0);
    double cl = cface(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double cr = cface(i);
        ws.lo[i] = -cl;
        ws.up[i] = -cr;
        ws.di[i] = rho0[i] + cl + cr;
        ws.rhs[i] = rho0[i] * v[i];
        cl = cr;
    }
    if (bc.kind == BcKind::NeumannUW) {
        const double c0 = cface(0);
        const double cN = cface(n - 2);
        ws.di[0] = rho0[0] + 2.0 * c0; // half cell, zero flux through the wall
        ws.up[0] = -2.0 * c0;
        ws.rhs[0] = rho0[0] * v[0];
        ws.di[n - 1] = rho0[n - 1] + 2.0 * cN;
        ws.lo[n - 1] = -2.0 * cN;
        ws.rhs[n - 1] = rho0[n - 1] * v[n - 1];
    } else {
        ws.di[0] = 1.0;
        ws.rhs[0] = bc_lo;
        ws.di[n - 1] = 1.0;
        ws.rhs[n - 1] = bc_hi;
    }
    solve_tridiag(ws.lo, ws.di, ws.up, ws.rhs);
    out = ws.rhs;
}

inline void check_state(const State& st, double J_floor) {
    const std::size_t n = st.n();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(st.J[i] > J_floor))
            throw NumericalError("vacuum collapse: J reached the floor at node " +
                                     std::to_string(i),
                                 i, st.t);
        if (!std::isfinite(st.J[i]) || !std::isfinite(st.u[i]) || !std::isfinite(st.P[i]) ||
            !std::isfinite(st.w[0][i]) || !std::isfinite(st.w[1][i]) ||
            !std::isfinite(st.h[0][i]) || !std::isfinite(st.h[1][i]))
            throw NumericalError("non-finite field value at node " + std::to_string(i), i, st.t);
    }
}

} // namespace detail

/// One-step integrator with reusable workspace. The two schemes share the
/// spatial discretization; only the time treatment of the viscous blocks
/// differs.
class TimeStepper {
public:
    TimeStepper(SolverConfig cfg, PhysParams pp) : cfg_(cfg), pp_(pp) {}

    const SolverConfig& config() const { return cfg_; }

    void set_sources(const SourceTerm* src) { src_ = src; }

    /// Advances st by dt in place.
    void advance(State& st, double dt) {
        if (cfg_.scheme == Scheme::ImexEuler) {
            advance_imex(st, dt);
            detail::check_state(st, cfg_.J_floor);
        } else {
            advance_rk2(st, dt); // guards the floor internally
        }
    }

private:
    void fetch_sources(double t, std::size_t n) {
        ws_.ensure(n);
        if (src_) {
            src_->eval(t, ws_.sJ, ws_.su, ws_.sw, ws_.sh, ws_.sP);
            ws_.have_sources = true;
        } else {
            ws_.have_sources = false;
        }
    }

    // Split step: implicit viscous diffusion, explicit everything else,
    // exact integrating factor for the pressure equation.
    void advance_imex(State& st, double dt) {
        const Grid& g = st.grid();
        const auto& rho0 = st.rho0();
        const std::size_t n = g.N;
        ws_.ensure(n);
        fetch_sources(st.t, n);

        detail::ddy_bc(st.u, g, cfg_.bc, ws_.uy);
        detail::ddy_bc(st.w[0], g, cfg_.bc, ws_.wxy);
        detail::ddy_bc(st.w[1], g, cfg_.bc, ws_.wyy);

        const bool pinned = cfg_.bc.kind != BcKind::NeumannUW;
        const double u_lo = cfg_.bc.kind == BcKind::Dilation ? -cfg_.bc.dilation_rate * g.L : 0.0;
        const double u_hi = -u_lo;

        // (i) implicit diffusion at frozen J
        std::vector<double>& ustar = ws_.tmp;
        detail::implicit_viscous(st.u, st.J, rho0, pp_.lambda, dt, g, cfg_.bc, u_lo, u_hi, ws_,
                                 ustar);
        std::vector<double> wstar0, wstar1;
        detail::implicit_viscous(st.w[0], st.J, rho0, pp_.mu, dt, g, cfg_.bc, 0.0, 0.0, ws_,
                                 wstar0);
        detail::implicit_viscous(st.w[1], st.J, rho0, pp_.mu, dt, g, cfg_.bc, 0.0, 0.0, ws_,
                                 wstar1);

        // (ii) explicit momentum sources: total stress gradient for u, the
        // magnetic tension for w
        for (std::size_t i = 0; i < n; ++i)
            ws_.Hbuf[i] =
                st.P[i] + 0.5 * (st.h[0][i] * st.h[0][i] + st.h[1][i] * st.h[1][i]);
        detail::flux_grad(ws_.Hbuf, g, ws_.grad);
        // flux_grad's wall entries already carry the half-cell closure
        std::vector<double> unew(n), wnew0(n), wnew1(n);
        const std::size_t lo = pinned ? 1 : 0;
        const std::size_t hi = pinned ? n - 1 : n;
        for (std::size_t i = lo; i < hi; ++i) {
            unew[i] = ustar[i] - dt * ws_.grad[i] / rho0[i];
            if (ws_.have_sources)
                unew[i] += dt * ws_.su[i] / rho0[i];
        }
        detail::flux_grad(st.h[0], g, ws_.grad);
        for (std::size_t i = lo; i < hi; ++i) {
            wnew0[i] = wstar0[i] + dt * ws_.grad[i] / rho0[i];
            if (ws_.have_sources)
                wnew0[i] += dt * ws_.sw[0][i] / rho0[i];
        }
        detail::flux_grad(st.h[1], g, ws_.grad);
        for (std::size_t i = lo; i < hi; ++i) {
            wnew1[i] = wstar1[i] + dt * ws_.grad[i] / rho0[i];
            if (ws_.have_sources)
                wnew1[i] += dt * ws_.sw[1][i] / rho0[i];
        }
        if (pinned) {
            unew[0] = u_lo;
            unew[n - 1] = u_hi;
            wnew0[0] = wnew0[n - 1] = 0.0;
            wnew1[0] = wnew1[n - 1] = 0.0;
        }

        // (iii) Jacobian from the updated velocity
        detail::ddy_bc(unew, g, cfg_.bc, ws_.grad);
        std::vector<double> Jnew(n);
        for (std::size_t i = 0; i < n; ++i) {
            Jnew[i] = st.J[i] + dt * ws_.grad[i];
            if (ws_.have_sources)
                Jnew[i] += dt * ws_.sJ[i];
        }

        // (iv) magnetic field, explicit at the old level
        std::vector<double> hnew0(n), hnew1(n);
        for (std::size_t i = 0; i < n; ++i) {
            hnew0[i] = st.h[0][i] + dt * (ws_.wxy[i] - ws_.uy[i] * st.h[0][i]) / st.J[i];
            hnew1[i] = st.h[1][i] + dt * (ws_.wyy[i] - ws_.uy[i] * st.h[1][i]) / st.J[i];
            if (ws_.have_sources) {
                hnew0[i] += dt * ws_.sh[0][i];
                hnew1[i] += dt * ws_.sh[1][i];
            }
        }

        // (v) pressure by its exact integrating factor; preserves P >= 0
        for (std::size_t i = 0; i < n; ++i) {
            const double uyJ = ws_.uy[i] / st.J[i];
            const double a = pp_.gamma * uyJ;
            const double wy2 = (ws_.wxy[i] * ws_.wxy[i] + ws_.wyy[i] * ws_.wyy[i]) /
                               (st.J[i] * st.J[i]);
            double S = (pp_.gamma - 1.0) * (pp_.lambda * uyJ * uyJ + pp_.mu * wy2);
            if (ws_.have_sources)
                S += ws_.sP[i];
            st.P[i] = std::exp(-a * dt) * (st.P[i] + dt * S);
        }

        st.u = std::move(unew);
        st.w[0] = std::move(wnew0);
        st.w[1] = std::move(wnew1);
        st.h[0] = std::move(hnew0);
        st.h[1] = std::move(hnew1);
        st.J = std::move(Jnew);
        st.t += dt;
    }

    // Fills the workspace slope buffers with the semi-discrete right side of
    // every equation at state st (sources already fetched for the stage time).
    void compute_rhs(const State& st) {
        const Grid& g = st.grid();
        const std::size_t n = g.N;
        ws_.ensure(n);
        ws_.cache_invrho0(st.rho0());

        const bool pinned = cfg_.bc.kind != BcKind::NeumannUW;
        const double inv_dy = 1.0 / g.dy;
        const double inv2 = 0.5 * inv_dy;
        const double* u = st.u.data();
        const double* wx = st.w[0].data();
        const double* wy = st.w[1].data();
        const double* hx = st.h[0].data();
        const double* hy = st.h[1].data();
        const double* J = st.J.data();
        const double* P = st.P.data();
        double* uy = ws_.uy.data();
        double* wxy = ws_.wxy.data();
        double* wyy = ws_.wyy.data();

        detail::pass_recip(n, J, ws_.invJ.data());
        detail::pass_deriv(n, inv2, u, wx, wy, uy, wxy, wyy);
        if (cfg_.bc.kind == BcKind::NeumannUW) {
            uy[0] = wxy[0] = wyy[0] = 0.0;
            uy[n - 1] = wxy[n - 1] = wyy[n - 1] = 0.0;
        } else {
            uy[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2;
            uy[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv2;
            wxy[0] = (-3.0 * wx[0] + 4.0 * wx[1] - wx[2]) * inv2;
            wxy[n - 1] = (3.0 * wx[n - 1] - 4.0 * wx[n - 2] + wx[n - 3]) * inv2;
            wyy[0] = (-3.0 * wy[0] + 4.0 * wy[1] - wy[2]) * inv2;
            wyy[n - 1] = (3.0 * wy[n - 1] - 4.0 * wy[n - 2] + wy[n - 3]) * inv2;
        }
        detail::pass_stress(n, P, hx, hy, ws_.q.data());
        detail::pass_faces(n, inv_dy, pp_.lambda, pp_.mu, u, wx, wy, hx, hy, J, ws_.q.data(),
                           ws_.fu.data(), ws_.fwx.data(), ws_.fwy.data(), ws_.aq.data(),
                           ws_.ahx.data(), ws_.ahy.data());
        detail::pass_momentum(n, inv_dy, ws_.fu.data(), ws_.fwx.data(), ws_.fwy.data(),
                              ws_.aq.data(), ws_.ahx.data(), ws_.ahy.data(),
                              ws_.invrho0.data(), ws_.ku.data(), ws_.kwx.data(),
                              ws_.kwy.data());
        detail::pass_pointwise(n, pp_.gamma, pp_.gamma - 1.0, pp_.lambda, pp_.mu, uy, wxy,
                               wyy, ws_.invJ.data(), P, hx, hy, ws_.kJ.data(), ws_.khx.data(),
                               ws_.khy.data(), ws_.kP.data());

        const double* fu = ws_.fu.data();
        const double* fwx = ws_.fwx.data();
        const double* fwy = ws_.fwy.data();
        const double* aq = ws_.aq.data();
        const double* ahx = ws_.ahx.data();
        const double* ahy = ws_.ahy.data();
        const double* q = ws_.q.data();
        const double* ir = ws_.invrho0.data();
        if (pinned) {
            ws_.ku[0] = ws_.ku[n - 1] = 0.0;
            ws_.kwx[0] = ws_.kwx[n - 1] = 0.0;
            ws_.kwy[0] = ws_.kwy[n - 1] = 0.0;
        } else {
            // half cells: no viscous flux through the walls; the pressure
            // flux at the wall face is the wall-node value
            ws_.ku[0] = (fu[0] * 2.0 - (aq[0] - q[0]) * 2.0) * inv_dy * ir[0];
            ws_.kwx[0] = (fwx[0] * 2.0 + (ahx[0] - hx[0]) * 2.0) * inv_dy * ir[0];
            ws_.kwy[0] = (fwy[0] * 2.0 + (ahy[0] - hy[0]) * 2.0) * inv_dy * ir[0];
            ws_.ku[n - 1] =
                (-fu[n - 2] * 2.0 - (q[n - 1] - aq[n - 2]) * 2.0) * inv_dy * ir[n - 1];
            ws_.kwx[n - 1] =
                (-fwx[n - 2] * 2.0 + (hx[n - 1] - ahx[n - 2]) * 2.0) * inv_dy * ir[n - 1];
            ws_.kwy[n - 1] =
                (-fwy[n - 2] * 2.0 + (hy[n - 1] - ahy[n - 2]) * 2.0) * inv_dy * ir[n - 1];
        }

        if (ws_.have_sources) {
            const std::size_t lo = pinned ? 1 : 0;
            const std::size_t cnt = pinned ? n - 2 : n;
            detail::pass_add_scaled(cnt, ws_.su.data() + lo, ir + lo, ws_.ku.data() + lo);
            detail::pass_add_scaled(cnt, ws_.sw[0].data() + lo, ir + lo, ws_.kwx.data() + lo);
            detail::pass_add_scaled(cnt, ws_.sw[1].data() + lo, ir + lo, ws_.kwy.data() + lo);
            detail::pass_add(n, ws_.sJ.data(), ws_.kJ.data());
            detail::pass_add(n, ws_.sh[0].data(), ws_.khx.data());
            detail::pass_add(n, ws_.sh[1].data(), ws_.khy.data());
            detail::pass_add(n, ws_.sP.data(), ws_.kP.data());
        }
    }

    void pin(State& st) const {
        if (cfg_.bc.kind == BcKind::NeumannUW)
            return;
        const std::size_t n = st.n();
        const double uL = cfg_.bc.kind == BcKind::Dilation
                              ? -cfg_.bc.dilation_rate * st.grid().L
                              : 0.0;
        st.u[0] = uL;
        st.u[n - 1] = -uL;
        st.w[0][0] = st.w[0][n - 1] = 0.0;
        st.w[1][0] = st.w[1][n - 1] = 0.0;
    }

    // Scalar right-side rows for the two wall nodes; mirrors the interior
    // kernel under each wall treatment.
    struct WallRow {
        double ku = 0, kwx = 0, kwy = 0, kJ = 0, khx = 0, khy = 0, kP = 0;
    };

    WallRow wall_row(const State& in, std::size_t i) const {
        const Grid& g = in.grid();
        const std::size_t n = g.N;
        const double inv_dy = 1.0 / g.dy;
        const double inv2 = 0.5 * inv_dy;
        WallRow r;
        const bool left = i == 0;
        if (cfg_.bc.kind == BcKind::NeumannUW) {
            // frozen pointwise rows (wall-node derivatives are 0); half-cell
            // momentum rows with zero viscous flux through the wall
            auto q_at = [&](std::size_t j) {
                return in.P[j] + 0.5 * (in.h[0][j] * in.h[0][j] + in.h[1][j] * in.h[1][j]);
            };
            if (left) {
                const double c = 2.0 * inv_dy / (in.J[0] + in.J[1]);
                const double fu = pp_.lambda * (in.u[1] - in.u[0]) * c;
                const double fwx = pp_.mu * (in.w[0][1] - in.w[0][0]) * c;
                const double fwy = pp_.mu * (in.w[1][1] - in.w[1][0]) * c;
                const double aq = 0.5 * (q_at(0) + q_at(1));
                const double ahx = 0.5 * (in.h[0][0] + in.h[0][1]);
                const double ahy = 0.5 * (in.h[1][0] + in.h[1][1]);
                const double ir = 1.0 / in.rho0()[0];
                r.ku = (fu * 2.0 - (aq - q_at(0)) * 2.0) * inv_dy * ir;
                r.kwx = (fwx * 2.0 + (ahx - in.h[0][0]) * 2.0) * inv_dy * ir;
                r.kwy = (fwy * 2.0 + (ahy - in.h[1][0]) * 2.0) * inv_dy * ir;
            } else {
                const double c = 2.0 * inv_dy / (in.J[n - 2] + in.J[n - 1]);
                const double fu = pp_.lambda * (in.u[n - 1] - in.u[n - 2]) * c;
                const double fwx = pp_.mu * (in.w[0][n - 1] - in.w[0][n - 2]) * c;
                const double fwy = pp_.mu * (in.w[1][n - 1] - in.w[1][n - 2]) * c;
                const double aq = 0.5 * (q_at(n - 2) + q_at(n - 1));
                const double ahx = 0.5 * (in.h[0][n - 2] + in.h[0][n - 1]);
                const double ahy = 0.5 * (in.h[1][n - 2] + in.h[1][n - 1]);
                const double ir = 1.0 / in.rho0()[n - 1];
                r.ku = (-fu * 2.0 - (q_at(n - 1) - aq) * 2.0) * inv_dy * ir;
                r.kwx = (-fwx * 2.0 + (in.h[0][n - 1] - ahx) * 2.0) * inv_dy * ir;
                r.kwy = (-fwy * 2.0 + (in.h[1][n - 1] - ahy) * 2.0) * inv_dy * ir;
            }
            return r; // kJ, kh, kP stay zero
        }
        // pinned walls: one-sided derivatives feed the pointwise rows
        double uy, wxy, wyy;
        if (left) {
            uy = (-3.0 * in.u[0] + 4.0 * in.u[1] - in.u[2]) * inv2;
            wxy = (-3.0 * in.w[0][0] + 4.0 * in.w[0][1] - in.w[0][2]) * inv2;
            wyy = (-3.0 * in.w[1][0] + 4.0 * in.w[1][1] - in.w[1][2]) * inv2;
        } else {
            uy = (3.0 * in.u[n - 1] - 4.0 * in.u[n - 2] + in.u[n - 3]) * inv2;
            wxy = (3.0 * in.w[0][n - 1] - 4.0 * in.w[0][n - 2] + in.w[0][n - 3]) * inv2;
            wyy = (3.0 * in.w[1][n - 1] - 4.0 * in.w[1][n - 2] + in.w[1][n - 3]) * inv2;
        }
        const double J = in.J[i];
        const double uyJ = uy / J;
        r.kJ = uy;
        r.khx = (wxy - uy * in.h[0][i]) / J;
        r.khy = (wyy - uy * in.h[1][i]) / J;
        const double wy2 = (wxy * wxy + wyy * wyy) / (J * J);
        r.kP = -pp_.gamma * uyJ * in.P[i] +
               (pp_.gamma - 1.0) * (pp_.lambda * uyJ * uyJ + pp_.mu * wy2);
        return r;
    }

    template <int Mode>
    void apply_wall(const State& in, State& out, std::size_t i, double dt) const {
        const WallRow r = wall_row(in, i);
        auto put = [&](double& o, double base, double k) {
            if constexpr (Mode == 0)
                o = base + dt * k;
            else
                o = 0.5 * (o + base + dt * k);
        };
        put(out.u[i], in.u[i], r.ku);
        put(out.w[0][i], in.w[0][i], r.kwx);
        put(out.w[1][i], in.w[1][i], r.kwy);
        put(out.J[i], in.J[i], r.kJ);
        put(out.h[0][i], in.h[0][i], r.khx);
        put(out.h[1][i], in.h[1][i], r.khy);
        put(out.P[i], in.P[i], r.kP);
    }

    void advance_rk2(State& st, double dt) {
        const std::size_t n = st.n();
        if (src_ == nullptr) {
            // fused fast path
            if (pred_.J.size() != n)
                pred_ = st;
            pred_.t = st.t + dt;
            pred_.geo = st.geo;
            ws_.ensure(n);
            ws_.cache_invrho0(st.rho0());
            const double inv_dy = 1.0 / st.grid().dy;
            const double minJ1 = detail::pass_stage_fused<0>(
                n, inv_dy, dt, pp_.lambda, pp_.mu, pp_.gamma, st.u.data(), st.w[0].data(),
                st.w[1].data(), st.h[0].data(), st.h[1].data(), st.J.data(), st.P.data(),
                ws_.invrho0.data(), pred_.u.data(), pred_.w[0].data(), pred_.w[1].data(),
                pred_.h[0].data(), pred_.h[1].data(), pred_.J.data(), pred_.P.data());
            apply_wall<0>(st, pred_, 0, dt);
            apply_wall<0>(st, pred_, n - 1, dt);
            pin(pred_);
            if (!(minJ1 > 0.0) || !(pred_.J[0] > 0.0) || !(pred_.J[n - 1] > 0.0))
                detail::check_state(pred_, cfg_.J_floor); // throws with details
            const double minJ2 = detail::pass_stage_fused<1>(
                n, inv_dy, dt, pp_.lambda, pp_.mu, pp_.gamma, pred_.u.data(),
                pred_.w[0].data(), pred_.w[1].data(), pred_.h[0].data(), pred_.h[1].data(),
                pred_.J.data(), pred_.P.data(), ws_.invrho0.data(), st.u.data(),
                st.w[0].data(), st.w[1].data(), st.h[0].data(), st.h[1].data(), st.J.data(),
                st.P.data());
            apply_wall<1>(pred_, st, 0, dt);
            apply_wall<1>(pred_, st, n - 1, dt);
            pin(st);
            st.t += dt;
            // a non-finite value anywhere reaches J within a few steps, so
            // the cheap floor test is the per-step guard; the detailed scan
            // produces the abort diagnostics
            if (!(minJ2 > cfg_.J_floor) || !(st.J[0] > cfg_.J_floor) ||
                !(st.J[n - 1] > cfg_.J_floor))
                detail::check_state(st, cfg_.J_floor);
            return;
        }
        advance_rk2_multipass(st, dt);
    }

    // Heun in two-register form: the predictor is built from the first slope
    // evaluation and the corrector folds the trapezoidal combination
    // st <- (st + pred + dt k2)/2 into the second.
    void advance_rk2_multipass(State& st, double dt) {
        const std::size_t n = st.n();
        if (pred_.J.size() != n)
            pred_ = st; // allocate once with the right shapes
        pred_.t = st.t + dt;
        pred_.geo = st.geo;

        fetch_sources(st.t, n);
        compute_rhs(st);
        detail::pass_axpy(n, dt, st.J.data(), ws_.kJ.data(), pred_.J.data());
        detail::pass_axpy(n, dt, st.u.data(), ws_.ku.data(), pred_.u.data());
        detail::pass_axpy(n, dt, st.w[0].data(), ws_.kwx.data(), pred_.w[0].data());
        detail::pass_axpy(n, dt, st.w[1].data(), ws_.kwy.data(), pred_.w[1].data());
        detail::pass_axpy(n, dt, st.h[0].data(), ws_.khx.data(), pred_.h[0].data());
        detail::pass_axpy(n, dt, st.h[1].data(), ws_.khy.data(), pred_.h[1].data());
        detail::pass_axpy(n, dt, st.P.data(), ws_.kP.data(), pred_.P.data());
        pin(pred_);

        fetch_sources(st.t + dt, n);
        compute_rhs(pred_);
        detail::pass_combine(n, dt, pred_.J.data(), ws_.kJ.data(), st.J.data());
        detail::pass_combine(n, dt, pred_.u.data(), ws_.ku.data(), st.u.data());
        detail::pass_combine(n, dt, pred_.w[0].data(), ws_.kwx.data(), st.w[0].data());
        detail::pass_combine(n, dt, pred_.w[1].data(), ws_.kwy.data(), st.w[1].data());
        detail::pass_combine(n, dt, pred_.h[0].data(), ws_.khx.data(), st.h[0].data());
        detail::pass_combine(n, dt, pred_.h[1].data(), ws_.khy.data(), st.h[1].data());
        detail::pass_combine(n, dt, pred_.P.data(), ws_.kP.data(), st.P.data());
        pin(st);
        st.t += dt;
        detail::check_state(st, cfg_.J_floor);
    }

    SolverConfig cfg_;
    PhysParams pp_;
    const SourceTerm* src_ = nullptr;
    detail::StepWorkspace ws_;
    State pred_;
};

/// Pure single-step interfaces built on the stepper.
inline State step_imex(const State& st, double dt, const SolverConfig& cfg,
                       const PhysParams& pp) {
    SolverConfig c = cfg;
    c.scheme = Scheme::ImexEuler;
    TimeStepper ts(c, pp);
    State out = st;
    ts.advance(out, dt);
    return out;
}

inline State step_explicit_rk2(const State& st, double dt, const SolverConfig& cfg,
                               const PhysParams& pp, const SourceTerm* src = nullptr) {
    SolverConfig c = cfg;
    c.scheme = Scheme::ExplicitRk2;
    TimeStepper ts(c, pp);
    ts.set_sources(src);
    State out = st;
    ts.advance(out, dt);
    return out;
}

} // namespace lagmhd
