#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "lagmhd/diagnostics.hpp"
#include "lagmhd/initial_data.hpp"
#include "lagmhd/solver.hpp"

namespace lagmhd {

/// Diagnostics evaluation settings resolved to absolute values.
struct DiagSettings {
    double alpha = 1.0;
    std::vector<double> deltas;   // absolute regularization offsets
    double rho_floor = 0.0;       // entropy/temperature restriction threshold
    std::size_t snapshot_every = 0; // 0 disables snapshots
};

struct RunSinks {
    std::function<void(const DiagnosticsRecord&)> on_record;
    std::function<void(const State&, const DerivedFields&)> on_snapshot;
    // called after every accepted step with the pre-step state, post-step
    // state and the step size
    std::function<void(const State&, const State&, double)> on_step;
};

struct RunResult {
    State final_state;
    std::size_t steps = 0;
    std::size_t records = 0;
    bool aborted = false;
    std::string abort_message;
    std::size_t abort_node = 0;
    double abort_time = 0.0;
    double wall_seconds = 0.0;
    double E0 = 0.0;
    double rho0_l1 = 0.0;
    double J_bound = 0.0;
    double J_floor = 0.0;
};

namespace detail {

inline DiagnosticsRecord build_record(const State& st, const PhysParams& pp,
                                      const DiagSettings& ds, double E0, double J_bound,
                                      double jgp_min_inc, double jcons_running) {
    DiagnosticsRecord r;
    const DerivedFields d = derived_fields(st, pp);
    const Conserved c = conserved(st, pp);
    r.t = st.t;
    r.energy = c.energy;
    r.E0 = E0;
    r.mom_u = c.mom_u;
    r.mom_w[0] = c.mom_w[0];
    r.mom_w[1] = c.mom_w[1];
    r.Jmin = *std::min_element(st.J.begin(), st.J.end());
    r.Jmax = *std::max_element(st.J.begin(), st.J.end());
    r.J_bound = J_bound;
    r.jgp_min_inc = jgp_min_inc;
    const EntropyExtrema e = entropy_extrema(st, d, ds.rho_floor);
    r.s_sup = e.s_sup;
    r.s_inf = e.s_inf;
    r.wnorms = weighted_norm_suite(st, d, ds.alpha, ds.deltas);
    r.h1 = h1_norms(st, d, ds.rho_floor);
    r.j_consistency = jcons_running;
    r.gn_ratio = gn_ratio(st, ds.alpha);
    return r;
}

} // namespace detail

/// Advances the initial data to T_end, emitting diagnostics records and
/// snapshots through the sinks. The Jacobian floor is derived from the
/// startup lower bound unless the caller fixed one in the config.
inline RunResult run(const InitialData& init, SolverConfig cfg, const PhysParams& pp,
                     const DiagSettings& ds, const RunSinks& sinks = {},
                     const SourceTerm* sources = nullptr, double J_floor_factor = 0.1) {
    const auto t_start = std::chrono::steady_clock::now();
    cfg.validate();

    State st = init.state();
    const Grid& g = st.grid();
    const std::size_t n = g.N;

    RunResult res;
    {
        const Conserved c0 = conserved(st, pp);
        res.E0 = c0.energy;
        res.rho0_l1 = integrate(st.rho0(), g);
        res.J_bound = jacobian_lower_bound(res.E0, res.rho0_l1, pp);
        res.J_floor = J_floor_factor * res.J_bound;
        cfg.J_floor = res.J_floor;
    }

    TimeStepper stepper(cfg, pp);
    stepper.set_sources(sources);

    // running accumulators: trapezoid-in-time of (G+P+H/2)/lambda for the
    // Jacobian consistency defect, and of u for the flow map (kept by the
    // caller through on_step when needed)
    std::vector<double> jc_acc(n, 0.0), jc_prev(n), jc_cur(n), uy_buf(n);
    double jcons_running = 0.0;
    std::vector<double> jgp_prev(n), jgp_cur(n);

    auto stress_integrand = [&](const State& s, std::vector<double>& out) {
        const double inv2 = 1.0 / (2.0 * g.dy);
        for (std::size_t i = 1; i + 1 < n; ++i)
            uy_buf[i] = (s.u[i + 1] - s.u[i - 1]) * inv2;
        uy_buf[0] = (-3.0 * s.u[0] + 4.0 * s.u[1] - s.u[2]) * inv2;
        uy_buf[n - 1] = (3.0 * s.u[n - 1] - 4.0 * s.u[n - 2] + s.u[n - 3]) * inv2;
        for (std::size_t i = 0; i < n; ++i) {
            const double H = s.h[0][i] * s.h[0][i] + s.h[1][i] * s.h[1][i];
            const double G = pp.lambda * uy_buf[i] / s.J[i] - s.P[i] - 0.5 * H;
            out[i] = (G + s.P[i] + 0.5 * H) / pp.lambda;
        }
    };
    auto jgp_fill = [&](const State& s, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::pow(s.J[i], pp.gamma) * s.P[i];
    };

    stress_integrand(st, jc_prev);
    jgp_fill(st, jgp_prev);

    auto emit_record = [&](double jgp_inc) {
        const DiagnosticsRecord r =
            detail::build_record(st, pp, ds, res.E0, res.J_bound, jgp_inc, jcons_running);
        if (sinks.on_record)
            sinks.on_record(r);
        ++res.records;
    };
    auto emit_snapshot = [&]() {
        if (sinks.on_snapshot)
            sinks.on_snapshot(st, derived_fields(st, pp));
    };

    emit_record(0.0);
    if (ds.snapshot_every > 0)
        emit_snapshot();

    State prev = st;
    std::size_t since_record = 0;
    while (st.t < cfg.T_end - 1e-14 * std::max(1.0, cfg.T_end)) {
        double dt = stable_dt(st, cfg, pp);
        dt = std::min(dt, cfg.T_end - st.t);
        prev = st;
        try {
            stepper.advance(st, dt);
        } catch (const NumericalError& e) {
            res.aborted = true;
            res.abort_message = e.what();
            res.abort_node = e.node();
            res.abort_time = prev.t;
            break;
        }
        ++res.steps;
        ++since_record;

        stress_integrand(st, jc_cur);
        for (std::size_t i = 0; i < n; ++i)
            jc_acc[i] += 0.5 * dt * (jc_prev[i] + jc_cur[i]);
        std::swap(jc_prev, jc_cur);

        if (sinks.on_step)
            sinks.on_step(prev, st, dt);

        const bool at_end = st.t >= cfg.T_end - 1e-14 * std::max(1.0, cfg.T_end);
        if (since_record >= cfg.output_every || at_end) {
            // the log is deferred to record times to keep the step loop lean
            for (std::size_t i = 0; i < n; ++i)
                jcons_running =
                    std::max(jcons_running, std::abs(std::log(st.J[i]) - jc_acc[i]));
            jgp_fill(st, jgp_cur);
            double inc = HUGE_VAL;
            for (std::size_t i = 0; i < n; ++i)
                inc = std::min(inc, jgp_cur[i] - jgp_prev[i]);
            std::swap(jgp_prev, jgp_cur);
            emit_record(inc);
            since_record = 0;
        }
        if (ds.snapshot_every > 0 && (res.steps % ds.snapshot_every == 0 || at_end))
            emit_snapshot();
    }

    res.final_state = std::move(st);
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

} // namespace lagmhd
