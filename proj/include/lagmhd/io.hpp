#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lagmhd/derived.hpp"
#include "lagmhd/diagnostics.hpp"
#include "lagmhd/flow_map.hpp"
#include "lagmhd/hypotheses.hpp"

namespace lagmhd {

inline constexpr const char* kCodeVersion = "lagmhd 0.1.0";

/// Shortest decimal that round-trips to the same double.
inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// FNV-1a over the canonical config text; identifies a run setup.
inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string diagnostics_csv_header(std::size_t n_deltas) {
    std::string h = "t,energy,E0,mom_u,mom_wx,mom_wy,Jmin,Jmax,J_bound,jgp_min_inc,s_sup,s_inf,"
                    "wF,wG,wH,wh";
    for (std::size_t k = 1; k <= n_deltas; ++k) {
        const std::string d = "_d" + std::to_string(k);
        h += ",wF" + d + ",wG" + d + ",wH" + d;
    }
    h += ",h1_u,h1_w,h1_theta,j_consistency,gn_ratio";
    return h;
}

inline std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
    std::string s;
    auto put = [&](double v) {
        if (!s.empty())
            s += ',';
        s += fmt_double(v);
    };
    put(r.t);
    put(r.energy);
    put(r.E0);
    put(r.mom_u);
    put(r.mom_w[0]);
    put(r.mom_w[1]);
    put(r.Jmin);
    put(r.Jmax);
    put(r.J_bound);
    put(r.jgp_min_inc);
    put(r.s_sup);
    put(r.s_inf);
    put(r.wnorms.wF);
    put(r.wnorms.wG);
    put(r.wnorms.wH);
    put(r.wnorms.wh);
    for (const auto& reg : r.wnorms.reg) {
        put(reg.qF);
        put(reg.qG);
        put(reg.qH);
    }
    put(r.h1.u);
    put(r.h1.w);
    put(r.h1.theta);
    put(r.j_consistency);
    put(r.gn_ratio);
    return s;
}

inline void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                                  const std::string& path) {
    if (records.empty())
        throw ValidationError("write_diagnostics_csv: no records");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << diagnostics_csv_header(records.front().wnorms.reg.size()) << '\n';
    for (const auto& r : records)
        out << diagnostics_csv_row(r) << '\n';
    out.flush();
    if (!out) {
        out.close();
        std::error_code ec;
        std::filesystem::remove(path, ec);
        throw IoError("write failed: " + path);
    }
}

/// JSON-lines snapshot: a header object then one object per node.
inline void write_snapshot(const State& st, const DerivedFields& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    const Grid& g = st.grid();
    out << "{\"t\":" << fmt_double(st.t) << ",\"N\":" << g.N << ",\"L\":" << fmt_double(g.L)
        << ",\"coordinate-system\":\"lagrange\"}\n";
    for (std::size_t i = 0; i < g.N; ++i) {
        out << "{\"y\":" << fmt_double(g.y[i]) << ",\"J\":" << fmt_double(st.J[i])
            << ",\"u\":" << fmt_double(st.u[i]) << ",\"wx\":" << fmt_double(st.w[0][i])
            << ",\"wy\":" << fmt_double(st.w[1][i]) << ",\"hx\":" << fmt_double(st.h[0][i])
            << ",\"hy\":" << fmt_double(st.h[1][i]) << ",\"P\":" << fmt_double(st.P[i])
            << ",\"Fx\":" << fmt_double(d.F[0][i]) << ",\"Fy\":" << fmt_double(d.F[1][i])
            << ",\"G\":" << fmt_double(d.G[i]) << ",\"H\":" << fmt_double(d.H[i])
            << ",\"rho\":" << fmt_double(d.rho[i]) << ",\"theta\":" << fmt_double(d.theta[i])
            << ",\"s\":" << (d.s_defined[i] ? fmt_double(d.s[i]) : std::string("null"))
            << "}\n";
    }
    out.flush();
    if (!out) {
        out.close();
        std::error_code ec;
        std::filesystem::remove(path, ec);
        throw IoError("write failed: " + path);
    }
}

inline void write_eulerian_snapshot(const EulerianFields& ef, double L,
                                    const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << "{\"t\":" << fmt_double(ef.t) << ",\"N\":" << ef.x.size()
        << ",\"L\":" << fmt_double(L) << ",\"coordinate-system\":\"euler\"}\n";
    for (std::size_t i = 0; i < ef.x.size(); ++i) {
        out << "{\"x\":" << fmt_double(ef.x[i]) << ",\"J\":" << fmt_double(ef.J[i])
            << ",\"u\":" << fmt_double(ef.u[i]) << ",\"wx\":" << fmt_double(ef.w[0][i])
            << ",\"wy\":" << fmt_double(ef.w[1][i]) << ",\"hx\":" << fmt_double(ef.h[0][i])
            << ",\"hy\":" << fmt_double(ef.h[1][i]) << ",\"P\":" << fmt_double(ef.P[i])
            << ",\"rho\":" << fmt_double(ef.rho[i]) << "}\n";
    }
    out.flush();
    if (!out) {
        out.close();
        std::error_code ec;
        std::filesystem::remove(path, ec);
        throw IoError("write failed: " + path);
    }
}

/// Reads a Lagrangian snapshot back into a State; rho0 is recovered from
/// rho * J, which the writer emitted bit-exactly.
inline State read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open snapshot: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty snapshot: " + path);
    nlohmann::json hdr;
    try {
        hdr = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("snapshot header parse error in " + path + ": " + e.what());
    }
    if (hdr.value("coordinate-system", "lagrange") != "lagrange")
        throw ValidationError("read_snapshot: only lagrangian snapshots can be reloaded");
    const std::size_t N = hdr.at("N").get<std::size_t>();
    const double L = hdr.at("L").get<double>();
    const double t = hdr.at("t").get<double>();

    GridDensity gd;
    gd.grid = Grid::make(L, N);
    gd.rho0.resize(N);
    gd.drho0.assign(N, 0.0);

    State st;
    st.t = t;
    st.J.resize(N);
    st.u.resize(N);
    st.w[0].resize(N);
    st.w[1].resize(N);
    st.h[0].resize(N);
    st.h[1].resize(N);
    st.P.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::getline(in, line))
            throw IoError("snapshot truncated: " + path);
        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError("snapshot row parse error in " + path + ": " + e.what());
        }
        st.J[i] = row.at("J").get<double>();
        st.u[i] = row.at("u").get<double>();
        st.w[0][i] = row.at("wx").get<double>();
        st.w[1][i] = row.at("wy").get<double>();
        st.h[0][i] = row.at("hx").get<double>();
        st.h[1][i] = row.at("hy").get<double>();
        st.P[i] = row.at("P").get<double>();
        gd.rho0[i] = row.at("rho").get<double>() * st.J[i];
    }
    // tabulated derivative for the reloaded density
    const auto dr = ddy(gd.rho0, gd.grid);
    gd.drho0 = dr;
    st.geo = std::make_shared<const GridDensity>(std::move(gd));
    return st;
}

/// Run manifest: config echo + hash, code version, startup constants, and the
/// hypothesis report.
inline void write_manifest(const std::string& path, const nlohmann::json& config_echo,
                           double E0, double rho0_l1, double J_bound, double J_floor,
                           const HypothesisReport& rep) {
    nlohmann::json j;
    j["code_version"] = kCodeVersion;
    const std::string cfg_text = config_echo.dump();
    j["config_hash"] = fnv1a_hex(cfg_text);
    j["config"] = config_echo;
    j["E0"] = E0;
    j["rho0_l1"] = rho0_l1;
    j["J_bound"] = J_bound;
    j["J_floor"] = J_floor;
    nlohmann::json h;
    h["h1_ok"] = rep.h1_ok;
    h["h2_ok"] = rep.h2_ok;
    h["h3_ok"] = rep.h3_ok;
    h["h4_ok"] = rep.h4_ok;
    h["star_ok"] = rep.star_ok;
    h["K1"] = rep.K1;
    h["A0"] = rep.A0;
    h["rho_bar"] = rep.rho_bar;
    h["alpha"] = rep.alpha;
    h["doubling_available"] = rep.doubling_available;
    h["norms"] = rep.norms;
    h["doubling_ratio"] = rep.doubling_ratio;
    j["hypotheses"] = h;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    out.flush();
    if (!out)
        throw IoError("write failed: " + path);
}

} // namespace lagmhd
