#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "lagmhd/core.hpp"
#include "lagmhd/initial_data.hpp"
#include "lagmhd/solver.hpp"

namespace lagmhd {

/// Full run configuration mapped 1:1 onto the JSON document.
struct RunConfig {
    // grid
    double L = 16.0;
    std::size_t N = 2049;
    // density
    ProfileKind density_kind = ProfileKind::PowerLaw;
    double Krho = 1.0;
    double ell = 2.0;
    std::string table_path;
    // bumps
    BumpSet bumps;
    // physics
    PhysParams physics = PhysParams::make(1.0, 1.0, 0.4, 1.0, 1.0);
    // solver
    SolverConfig solver;
    double J_floor_factor = 0.1;
    double dilation_a = 0.0;     // dilation bc only
    double dilation_P_init = 1.0;
    // diagnostics
    double alpha = -1.0;                            // < 0 means "use gamma"
    std::vector<double> deltas = {1e-2, 1e-4, 1e-6}; // relative to max rho0
    double rho_floor_quantile = 0.9;
    // output
    std::string out_dir = "out";
    std::size_t snapshot_every = 0;
    bool eulerian = false;

    double resolved_alpha() const { return alpha < 0.0 ? physics.gamma : alpha; }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                           const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!known.count(key))
            throw ValidationError("config: unknown key \"" + where + key + "\"");
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(std::string("config: bad value for \"") + key + "\"");
    }
}

inline BumpSpec parse_bump(const nlohmann::json& j, const std::string& where, BumpSpec dflt) {
    reject_unknown(j, {"center", "width", "amplitude"}, where + ".");
    BumpSpec b = dflt;
    b.center = get_or(j, "center", b.center);
    b.width = get_or(j, "width", b.width);
    b.amplitude = get_or(j, "amplitude", b.amplitude);
    if (!(b.width > 0.0))
        throw ValidationError("config: " + where + ".width must be positive");
    return b;
}

} // namespace detail

/// Strict parse: syntax errors carry the parser position, constraint
/// violations name the offending field, unknown keys are rejected.
inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config: JSON parse error: ") + e.what());
    }
    using detail::get_or;
    using detail::reject_unknown;

    RunConfig c;
    reject_unknown(j, {"grid", "density", "bumps", "physics", "solver", "diagnostics", "output"},
                   "");

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, {"L", "N"}, "grid.");
        c.L = get_or(g, "L", c.L);
        c.N = get_or<std::size_t>(g, "N", c.N);
        if (!(c.L > 0.0))
            throw ValidationError("config: grid.L must be positive");
        if (c.N < 3 || c.N % 2 == 0)
            throw ValidationError("config: grid.N must be odd and >= 3");
    }
    if (j.contains("density")) {
        const auto& d = j.at("density");
        reject_unknown(d, {"kind", "Krho", "ell", "table-path"}, "density.");
        const std::string kind = get_or<std::string>(d, "kind", "power-law");
        if (kind == "power-law") {
            c.density_kind = ProfileKind::PowerLaw;
            c.Krho = get_or(d, "Krho", c.Krho);
            c.ell = get_or(d, "ell", c.ell);
            if (!(c.Krho > 0.0))
                throw ValidationError("config: density.Krho must be positive");
            if (!(c.ell >= 0.0))
                throw ValidationError("config: density.ell must be nonnegative");
        } else if (kind == "tabulated") {
            c.density_kind = ProfileKind::Tabulated;
            c.table_path = get_or<std::string>(d, "table-path", "");
            if (c.table_path.empty())
                throw ValidationError("config: density.table-path required for tabulated kind");
        } else {
            throw ValidationError("config: density.kind must be power-law or tabulated");
        }
    }
    if (j.contains("physics")) {
        const auto& p = j.at("physics");
        reject_unknown(p, {"lambda", "mu", "R", "cv", "A"}, "physics.");
        c.physics = PhysParams::make(get_or(p, "lambda", 1.0), get_or(p, "mu", 1.0),
                                     get_or(p, "R", 0.4), get_or(p, "cv", 1.0),
                                     get_or(p, "A", 1.0));
    }
    if (j.contains("bumps")) {
        const auto& b = j.at("bumps");
        reject_unknown(b, {"u0", "w0x", "w0y", "h0x", "h0y"}, "bumps.");
        const BumpSpec dflt{0.0, std::max(1.0, c.L / 8.0), 0.0};
        c.bumps.u0 = b.contains("u0") ? detail::parse_bump(b.at("u0"), "bumps.u0", dflt) : dflt;
        c.bumps.w0x =
            b.contains("w0x") ? detail::parse_bump(b.at("w0x"), "bumps.w0x", dflt) : dflt;
        c.bumps.w0y =
            b.contains("w0y") ? detail::parse_bump(b.at("w0y"), "bumps.w0y", dflt) : dflt;
        c.bumps.h0x =
            b.contains("h0x") ? detail::parse_bump(b.at("h0x"), "bumps.h0x", dflt) : dflt;
        c.bumps.h0y =
            b.contains("h0y") ? detail::parse_bump(b.at("h0y"), "bumps.h0y", dflt) : dflt;
    } else {
        const BumpSpec dflt{0.0, std::max(1.0, c.L / 8.0), 0.0};
        c.bumps = {dflt, dflt, dflt, dflt, dflt};
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        reject_unknown(s, {"scheme", "cfl", "dt_max", "T_end", "bc", "J_floor_factor"},
                       "solver.");
        const std::string scheme = get_or<std::string>(s, "scheme", "imex-euler");
        if (scheme == "imex-euler")
            c.solver.scheme = Scheme::ImexEuler;
        else if (scheme == "explicit-rk2")
            c.solver.scheme = Scheme::ExplicitRk2;
        else
            throw ValidationError("config: solver.scheme must be imex-euler or explicit-rk2");
        c.solver.cfl = get_or(s, "cfl", c.solver.cfl);
        c.solver.dt_max = get_or(s, "dt_max", c.solver.dt_max);
        c.solver.T_end = get_or(s, "T_end", c.solver.T_end);
        c.J_floor_factor = get_or(s, "J_floor_factor", c.J_floor_factor);
        if (!(c.J_floor_factor > 0.0))
            throw ValidationError("config: solver.J_floor_factor must be positive");
        if (s.contains("bc")) {
            const auto& bc = s.at("bc");
            if (bc.is_string()) {
                const std::string name = bc.get<std::string>();
                if (name == "homogeneous-dirichlet-uw")
                    c.solver.bc.kind = BcKind::DirichletUW;
                else if (name == "homogeneous-neumann-uw")
                    c.solver.bc.kind = BcKind::NeumannUW;
                else
                    throw ValidationError("config: solver.bc must be homogeneous-dirichlet-uw, "
                                          "homogeneous-neumann-uw, or {\"dilation\": {...}}");
            } else if (bc.is_object()) {
                reject_unknown(bc, {"dilation"}, "solver.bc.");
                const auto& dl = bc.at("dilation");
                reject_unknown(dl, {"a", "P_init"}, "solver.bc.dilation.");
                c.solver.bc.kind = BcKind::Dilation;
                c.dilation_a = get_or(dl, "a", 0.5);
                c.dilation_P_init = get_or(dl, "P_init", 1.0);
                c.solver.bc.dilation_rate = c.dilation_a;
                if (!(c.dilation_P_init > 0.0))
                    throw ValidationError("config: solver.bc.dilation.P_init must be positive");
            } else {
                throw ValidationError("config: solver.bc has the wrong type");
            }
        }
        // cfl/dt_max/T_end range checks live in SolverConfig::validate
        c.solver.J_floor = 1.0; // placeholder; the runner recomputes it
        c.solver.validate();
        c.solver.J_floor = 1e-300;
    }
    if (j.contains("diagnostics")) {
        const auto& d = j.at("diagnostics");
        reject_unknown(d, {"alpha", "deltas", "rho_floor_quantile", "output_every"},
                       "diagnostics.");
        c.alpha = get_or(d, "alpha", c.alpha);
        if (d.contains("deltas")) {
            c.deltas = d.at("deltas").get<std::vector<double>>();
            if (c.deltas.empty())
                throw ValidationError("config: diagnostics.deltas must be nonempty");
            for (double v : c.deltas)
                if (!(v > 0.0))
                    throw ValidationError("config: diagnostics.deltas must be positive");
        }
        c.rho_floor_quantile = get_or(d, "rho_floor_quantile", c.rho_floor_quantile);
        if (!(c.rho_floor_quantile >= 0.0) || !(c.rho_floor_quantile <= 1.0))
            throw ValidationError("config: diagnostics.rho_floor_quantile must be in [0,1]");
        c.solver.output_every = get_or<std::size_t>(d, "output_every", 10);
        if (c.solver.output_every == 0)
            throw ValidationError("config: diagnostics.output_every must be positive");
    } else {
        c.solver.output_every = 10;
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        reject_unknown(o, {"dir", "snapshot_every", "eulerian"}, "output.");
        c.out_dir = get_or<std::string>(o, "dir", c.out_dir);
        c.snapshot_every = get_or<std::size_t>(o, "snapshot_every", c.snapshot_every);
        c.eulerian = get_or(o, "eulerian", c.eulerian);
    }
    return c;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

/// Lossless echo of every effective parameter, including the derived gamma.
inline nlohmann::json config_echo(const RunConfig& c) {
    nlohmann::json j;
    j["grid"] = {{"L", c.L}, {"N", c.N}};
    if (c.density_kind == ProfileKind::PowerLaw)
        j["density"] = {{"kind", "power-law"}, {"Krho", c.Krho}, {"ell", c.ell}};
    else
        j["density"] = {{"kind", "tabulated"}, {"table-path", c.table_path}};
    auto bump = [](const BumpSpec& b) {
        return nlohmann::json{
            {"center", b.center}, {"width", b.width}, {"amplitude", b.amplitude}};
    };
    j["bumps"] = {{"u0", bump(c.bumps.u0)},
                  {"w0x", bump(c.bumps.w0x)},
                  {"w0y", bump(c.bumps.w0y)},
                  {"h0x", bump(c.bumps.h0x)},
                  {"h0y", bump(c.bumps.h0y)}};
    j["physics"] = {{"lambda", c.physics.lambda}, {"mu", c.physics.mu},     {"R", c.physics.R},
                    {"cv", c.physics.cv},         {"A", c.physics.A},       {"gamma", c.physics.gamma}};
    nlohmann::json bc;
    switch (c.solver.bc.kind) {
    case BcKind::DirichletUW: bc = "homogeneous-dirichlet-uw"; break;
    case BcKind::NeumannUW: bc = "homogeneous-neumann-uw"; break;
    case BcKind::Dilation:
        bc = nlohmann::json{{"dilation", {{"a", c.dilation_a}, {"P_init", c.dilation_P_init}}}};
        break;
    }
    j["solver"] = {{"scheme", c.solver.scheme == Scheme::ImexEuler ? "imex-euler" : "explicit-rk2"},
                   {"cfl", c.solver.cfl},
                   {"dt_max", c.solver.dt_max},
                   {"T_end", c.solver.T_end},
                   {"bc", bc},
                   {"J_floor_factor", c.J_floor_factor}};
    j["diagnostics"] = {{"alpha", c.resolved_alpha()},
                        {"deltas", c.deltas},
                        {"rho_floor_quantile", c.rho_floor_quantile},
                        {"output_every", c.solver.output_every}};
    j["output"] = {{"dir", c.out_dir}, {"snapshot_every", c.snapshot_every}, {"eulerian", c.eulerian}};
    return j;
}

} // namespace lagmhd
