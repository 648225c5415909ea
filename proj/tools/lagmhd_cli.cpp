// Command-line front end: simulation runs, data validation, oracle studies,
// and two-run comparisons. Exit codes: 0 success, 2 validation failure,
// 3 numerical abort, 4 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>

#include "lagmhd/config.hpp"
#include "lagmhd/convergence.hpp"
#include "lagmhd/dilation.hpp"
#include "lagmhd/io.hpp"
#include "lagmhd/mms.hpp"
#include "lagmhd/residuals.hpp"
#include "lagmhd/runner.hpp"

namespace fs = std::filesystem;
using namespace lagmhd;

namespace {

DensityProfile profile_from_config(const RunConfig& cfg) {
    if (cfg.density_kind == ProfileKind::PowerLaw)
        return power_law_density(cfg.Krho, cfg.ell);
    std::ifstream in(cfg.table_path);
    if (!in)
        throw IoError("cannot open density table: " + cfg.table_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("density table parse error: " + std::string(e.what()));
    }
    const auto y = j.at("y").get<std::vector<double>>();
    const auto r = j.at("rho0").get<std::vector<double>>();
    const auto dr = j.at("drho0").get<std::vector<double>>();
    if (y.size() != r.size() || y.size() != dr.size())
        throw ValidationError("density table arrays have mismatched lengths");
    std::vector<DensitySample> samples(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        samples[i] = {y[i], r[i], dr[i]};
    return tabulated_density(std::move(samples));
}

InitialData initial_from_config(const RunConfig& cfg, const DensityProfile& prof,
                                const Grid& grid) {
    if (cfg.solver.bc.kind == BcKind::Dilation) {
        // linear velocity profile and uniform pressure admit the exact flow
        InitialData d = build_initial_data(prof, BumpSet{}, cfg.physics, grid);
        for (std::size_t i = 0; i < grid.N; ++i)
            d.u0[i] = cfg.dilation_a * grid.y[i];
        d.P0.assign(grid.N, cfg.dilation_P_init);
        return d;
    }
    return build_initial_data(prof, cfg.bumps, cfg.physics, grid, 1.0);
}

DiagSettings diag_from_config(const RunConfig& cfg, const GridDensity& geo) {
    DiagSettings ds;
    ds.alpha = cfg.resolved_alpha();
    const double rho_max = *std::max_element(geo.rho0.begin(), geo.rho0.end());
    for (double rel : cfg.deltas)
        ds.deltas.push_back(rel * rho_max);
    ds.rho_floor = geo.profile.kind == ProfileKind::PowerLaw
                       ? geo.profile.value(cfg.rho_floor_quantile * geo.grid.L)
                       : geo.profile.value(cfg.rho_floor_quantile * geo.grid.L);
    ds.snapshot_every = cfg.snapshot_every;
    return ds;
}

std::string snap_name(std::size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06zu.jsonl", idx);
    return buf;
}

int cmd_simulate(const std::string& config_path) {
    const RunConfig cfg = parse_config_file(config_path);
    const DensityProfile prof = profile_from_config(cfg);
    const Grid grid = Grid::make(cfg.L, cfg.N);
    const InitialData init = initial_from_config(cfg, prof, grid);

    fs::create_directories(cfg.out_dir);

    HypothesisOptions hopt;
    hopt.bumps = cfg.bumps;
    const HypothesisReport rep =
        validate_hypotheses(prof, init, cfg.resolved_alpha(), cfg.physics, hopt);

    const DiagSettings ds = diag_from_config(cfg, *init.geo);

    std::vector<DiagnosticsRecord> records;
    std::vector<double> eta = grid.y; // flow map accumulated alongside the run
    std::size_t snap_idx = 0;

    RunSinks sinks;
    sinks.on_record = [&](const DiagnosticsRecord& r) { records.push_back(r); };
    sinks.on_step = [&](const State& before, const State& after, double dt) {
        for (std::size_t i = 0; i < grid.N; ++i)
            eta[i] += 0.5 * dt * (before.u[i] + after.u[i]);
    };
    sinks.on_snapshot = [&](const State& st, const DerivedFields& d) {
        const fs::path p = fs::path(cfg.out_dir) / snap_name(snap_idx);
        write_snapshot(st, d, p.string());
        if (cfg.eulerian) {
            std::vector<double> xg(grid.N);
            const double a = eta.front(), b = eta.back();
            for (std::size_t i = 0; i < grid.N; ++i)
                xg[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(grid.N - 1);
            const EulerianFields ef = to_eulerian(st, eta, xg);
            char buf[32];
            std::snprintf(buf, sizeof(buf), "euler_%06zu.jsonl", snap_idx);
            write_eulerian_snapshot(ef, grid.L, (fs::path(cfg.out_dir) / buf).string());
        }
        ++snap_idx;
    };

    const RunResult rr = run(init, cfg.solver, cfg.physics, ds, sinks, nullptr,
                             cfg.J_floor_factor);

    write_manifest((fs::path(cfg.out_dir) / "manifest.json").string(), config_echo(cfg), rr.E0,
                   rr.rho0_l1, rr.J_bound, rr.J_floor, rep);
    if (!records.empty())
        write_diagnostics_csv(records, (fs::path(cfg.out_dir) / "diagnostics.csv").string());

    std::cout << "steps=" << rr.steps << " records=" << rr.records
              << " t_final=" << fmt_double(rr.final_state.t)
              << " wall_s=" << fmt_double(rr.wall_seconds) << "\n";
    if (rr.aborted) {
        std::cerr << "numerical abort: " << rr.abort_message << " (node " << rr.abort_node
                  << ", t " << fmt_double(rr.abort_time) << ")\n";
        return 3;
    }
    return 0;
}

int cmd_check_data(const std::string& config_path) {
    const RunConfig cfg = parse_config_file(config_path);
    const DensityProfile prof = profile_from_config(cfg);
    const Grid grid = Grid::make(cfg.L, cfg.N);
    const InitialData init = initial_from_config(cfg, prof, grid);
    HypothesisOptions hopt;
    hopt.bumps = cfg.bumps;
    const HypothesisReport rep =
        validate_hypotheses(prof, init, cfg.resolved_alpha(), cfg.physics, hopt);
    nlohmann::json j;
    j["h1_ok"] = rep.h1_ok;
    j["h2_ok"] = rep.h2_ok;
    j["h3_ok"] = rep.h3_ok;
    j["h4_ok"] = rep.h4_ok;
    j["star_ok"] = rep.star_ok;
    j["K1"] = rep.K1;
    j["A0"] = rep.A0;
    j["rho_bar"] = rep.rho_bar;
    j["alpha"] = rep.alpha;
    j["doubling_available"] = rep.doubling_available;
    j["norms"] = rep.norms;
    j["doubling_ratio"] = rep.doubling_ratio;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_dilation_test(const std::string& config_path) {
    const RunConfig cfg = parse_config_file(config_path);
    if (cfg.solver.bc.kind != BcKind::Dilation)
        throw ValidationError("dilation-test requires solver.bc = {\"dilation\": {...}}");
    DilationParams dp{cfg.dilation_a, cfg.dilation_P_init, cfg.physics};

    auto run_level = [&](std::size_t N, double forced_dt) {
        const Grid grid = Grid::make(cfg.L, N);
        const DensityProfile prof = profile_from_config(cfg);
        const InitialData init = initial_from_config(cfg, prof, grid);
        SolverConfig sc = cfg.solver;
        if (forced_dt > 0.0) {
            sc.dt_max = forced_dt;
            sc.cfl = 1.0;
        }
        DiagSettings ds = diag_from_config(cfg, *init.geo);
        State st = init.state();
        TimeStepper ts(sc, cfg.physics);
        double first_dt = -1.0;
        while (st.t < sc.T_end - 1e-14) {
            double dt = std::min(stable_dt(st, sc, cfg.physics), sc.T_end - st.t);
            if (first_dt < 0.0)
                first_dt = dt;
            ts.advance(st, dt);
        }
        const DilationValue v = dilation_exact(dp, st.t);
        double errJ = 0.0, errP = 0.0;
        for (std::size_t i = 0; i < st.n(); ++i) {
            errJ = std::max(errJ, std::abs(st.J[i] - v.J) / std::abs(v.J));
            errP = std::max(errP, std::abs(st.P[i] - v.P) / std::abs(v.P));
        }
        return std::tuple<double, double, double>(errJ, errP, first_dt);
    };

    const auto [errJ, errP, dt0] = run_level(cfg.N, -1.0);
    const auto [errJ2, errP2, dt1] = run_level(2 * (cfg.N - 1) + 1, dt0 / 2.0);
    std::cout << "errJ=" << fmt_double(errJ) << " errP=" << fmt_double(errP) << "\n";
    std::cout << "refined: errJ=" << fmt_double(errJ2) << " errP=" << fmt_double(errP2)
              << " ratioP=" << fmt_double(errP / errP2) << "\n";
    return 0;
}

int cmd_mms(const std::string& config_path) {
    const RunConfig cfg = parse_config_file(config_path);
    const std::vector<std::size_t> levels = {257, 513, 1025, 2049};
    std::vector<double> errors;
    for (std::size_t N : levels) {
        const Grid grid = Grid::make(cfg.L, N);
        const auto geo = std::make_shared<const GridDensity>(
            GridDensity::make(profile_from_config(cfg), grid));
        const ManufacturedSolution sol = default_manufactured(cfg.L);
        const MmsSource src(sol, geo, cfg.physics);
        State st = sol.sample(0.0, geo);
        SolverConfig sc = cfg.solver;
        sc.scheme = Scheme::ExplicitRk2;
        sc.bc.kind = BcKind::DirichletUW;
        sc.J_floor = 1e-12;
        TimeStepper ts(sc, cfg.physics);
        ts.set_sources(&src);
        while (st.t < sc.T_end - 1e-14)
            ts.advance(st, std::min(stable_dt(st, sc, cfg.physics), sc.T_end - st.t));
        const State ref = sol.sample(st.t, geo);
        double err = 0.0;
        for (std::size_t i = 0; i < st.n(); ++i) {
            err = std::max(err, std::abs(st.u[i] - ref.u[i]));
            err = std::max(err, std::abs(st.J[i] - ref.J[i]));
            err = std::max(err, std::abs(st.P[i] - ref.P[i]));
            err = std::max(err, std::abs(st.h[0][i] - ref.h[0][i]));
            err = std::max(err, std::abs(st.w[0][i] - ref.w[0][i]));
        }
        errors.push_back(err);
        std::cout << "N=" << N << " err=" << fmt_double(err) << "\n";
    }
    std::vector<double> factors(levels.size() - 1, 2.0);
    const OrderFit fit = convergence_order(errors, factors);
    std::cout << "order=" << fmt_double(fit.order) << (fit.monotone ? "" : " (non-monotone)")
              << "\n";
    return 0;
}

std::vector<State> load_snapshots(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename().string().rfind("snap_", 0) == 0 &&
            e.path().extension() == ".jsonl")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<State> states;
    for (const auto& f : files)
        states.push_back(read_snapshot(f.string()));
    std::sort(states.begin(), states.end(),
              [](const State& a, const State& b) { return a.t < b.t; });
    return states;
}

int cmd_residuals(const std::string& dir, const PhysParams& pp) {
    const auto states = load_snapshots(dir);
    if (states.size() < 3)
        throw ValidationError("residuals: need at least 3 snapshots in " + dir);
    std::ofstream out(fs::path(dir) / "residuals.csv");
    if (!out)
        throw IoError("cannot write residuals.csv in " + dir);
    out << "t,identity,l2,linf\n";
    std::size_t triples = 0;
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
        const double d1 = states[k].t - states[k - 1].t;
        const double d2 = states[k + 1].t - states[k].t;
        if (std::abs(d2 - d1) > 1e-10 * std::max(1.0, std::abs(d1)))
            continue; // skip irregular tails
        for (IdentityKind which : {IdentityKind::FEq, IdentityKind::HEq, IdentityKind::GEq,
                                   IdentityKind::PEq, IdentityKind::hEq}) {
            const IdentityResidual r =
                identity_residual(which, states[k - 1], states[k], states[k + 1], pp);
            out << fmt_double(r.time) << ',' << identity_name(which) << ','
                << fmt_double(r.l2) << ',' << fmt_double(r.linf) << "\n";
            std::cout << "t=" << fmt_double(r.time) << " " << identity_name(which)
                      << " l2=" << fmt_double(r.l2) << " linf=" << fmt_double(r.linf) << "\n";
        }
        ++triples;
    }
    if (triples == 0)
        throw ValidationError("residuals: no uniformly spaced snapshot triples in " + dir);
    return 0;
}

int cmd_compare(const std::string& dirA, const std::string& dirB) {
    const auto a = load_snapshots(dirA);
    const auto b = load_snapshots(dirB);
    if (a.empty() || b.empty())
        throw ValidationError("compare: both run directories need snapshots");
    std::cout << "t,difference\n";
    std::size_t matched = 0;
    for (const auto& sa : a) {
        for (const auto& sb : b) {
            if (std::abs(sa.t - sb.t) <= 1e-12 * std::max(1.0, std::abs(sa.t))) {
                std::cout << fmt_double(sa.t) << ',' << fmt_double(difference_functional(sa, sb))
                          << "\n";
                ++matched;
                break;
            }
        }
    }
    if (matched == 0)
        throw ValidationError("compare: no snapshots at matching times");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D Lagrangian planar MHD simulator with invariant diagnostics"};
    app.require_subcommand(1);

    std::string config_path, dirA, dirB;
    double lambda = 1.0, mu = 1.0, R = 0.4, cv = 1.0;

    auto* sim = app.add_subcommand("simulate", "advance a configured run and emit diagnostics");
    sim->add_option("config", config_path, "JSON run configuration")->required();

    auto* chk = app.add_subcommand("check-data", "hypothesis report for the configured data");
    chk->add_option("config", config_path, "JSON run configuration")->required();

    auto* dil = app.add_subcommand("dilation-test", "compare against the exact dilation flow");
    dil->add_option("config", config_path, "JSON run configuration")->required();

    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    mms->add_option("config", config_path, "JSON run configuration")->required();

    auto* res = app.add_subcommand("residuals", "evaluate identity residuals on snapshots");
    res->add_option("snapshot-dir", dirA, "directory with snap_*.jsonl")->required();
    res->add_option("--lambda", lambda, "longitudinal viscosity");
    res->add_option("--mu", mu, "shear viscosity");
    res->add_option("--R", R, "gas constant");
    res->add_option("--cv", cv, "specific heat");

    auto* cmp = app.add_subcommand("compare", "difference functional between two runs");
    cmp->add_option("runA", dirA, "first run directory")->required();
    cmp->add_option("runB", dirB, "second run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path);
        if (chk->parsed())
            return cmd_check_data(config_path);
        if (dil->parsed())
            return cmd_dilation_test(config_path);
        if (mms->parsed())
            return cmd_mms(config_path);
        if (res->parsed())
            return cmd_residuals(dirA, PhysParams::make(lambda, mu, R, cv, 1.0));
        if (cmp->parsed())
            return cmd_compare(dirA, dirB);
    } catch (const NumericalError& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
