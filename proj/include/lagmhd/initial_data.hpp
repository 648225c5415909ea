#pragma once

#include <cmath>
#include <memory>
#include <optional>

#include "lagmhd/core.hpp"
#include "lagmhd/state.hpp"

namespace lagmhd {

/// Smooth compactly supported bump: amp * exp(1 - 1/(1 - ((y-c)/w)^2)) inside
/// |y-c| < w, exactly zero (bitwise) outside. Peak value is amp at y = c.
struct BumpSpec {
    double center = 0.0;
    double width = 1.0;
    double amplitude = 0.0;

    double operator()(double y) const {
        if (amplitude == 0.0)
            return 0.0;
        const double s = (y - center) / width;
        const double q = 1.0 - s * s;
        if (!(q > 0.0))
            return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / q);
    }
};

/// Bumps for the five velocity/field components.
struct BumpSet {
    BumpSpec u0;
    BumpSpec w0x;
    BumpSpec w0y;
    BumpSpec h0x;
    BumpSpec h0y;
};

struct InitialData {
    std::shared_ptr<const GridDensity> geo;
    std::vector<double> J0;
    std::vector<double> u0;
    Vec2Field w0;
    Vec2Field h0;
    std::vector<double> P0;
    double s0 = 1.0; // constant initial entropy used to build P0

    State state() const {
        State st;
        st.t = 0.0;
        st.J = J0;
        st.u = u0;
        st.w = w0;
        st.h = h0;
        st.P = P0;
        st.geo = geo;
        return st;
    }
};

namespace detail {

inline void check_support(const BumpSpec& b, double L, const char* name) {
    if (b.amplitude == 0.0)
        return;
    if (!(b.width > 0.0))
        throw ValidationError(std::string("bump ") + name + ": width must be positive");
    // keep a margin of at least 25% of L between support and boundary
    if (std::abs(b.center) + b.width > 0.75 * L)
        throw ValidationError(std::string("bump ") + name +
                              ": support must stay inside [-0.75L, 0.75L]");
}

} // namespace detail

/// Assembles (J0, u0, w0, h0, P0) on the grid: J0 identically one, bump
/// velocity and magnetic fields, and the constant-entropy pressure
/// P0 = A e^{s0/cv} rho0^gamma.
inline InitialData build_initial_data(const DensityProfile& profile, const BumpSet& bumps,
                                      const PhysParams& pp, const Grid& grid,
                                      double s0 = 1.0) {
    detail::check_support(bumps.u0, grid.L, "u0");
    detail::check_support(bumps.w0x, grid.L, "w0x");
    detail::check_support(bumps.w0y, grid.L, "w0y");
    detail::check_support(bumps.h0x, grid.L, "h0x");
    detail::check_support(bumps.h0y, grid.L, "h0y");

    InitialData d;
    d.geo = std::make_shared<const GridDensity>(GridDensity::make(profile, grid));
    d.s0 = s0;
    const std::size_t n = grid.N;
    d.J0.assign(n, 1.0);
    d.u0.resize(n);
    d.w0[0].resize(n);
    d.w0[1].resize(n);
    d.h0[0].resize(n);
    d.h0[1].resize(n);
    d.P0.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = grid.y[i];
        d.u0[i] = bumps.u0(y);
        d.w0[0][i] = bumps.w0x(y);
        d.w0[1][i] = bumps.w0y(y);
        d.h0[0][i] = bumps.h0x(y);
        d.h0[1][i] = bumps.h0y(y);
        d.P0[i] = pressure_from_entropy(s0, d.geo->rho0[i], pp);
    }
    return d;
}

/// Same assembly but with a caller-supplied pressure field.
inline InitialData build_initial_data_with_pressure(const DensityProfile& profile,
                                                    const BumpSet& bumps, const PhysParams& pp,
                                                    const Grid& grid,
                                                    std::vector<double> P0) {
    InitialData d = build_initial_data(profile, bumps, pp, grid);
    if (P0.size() != grid.N)
        throw ValidationError("build_initial_data: P0 length does not match grid");
    for (double p : P0)
        if (p < 0.0)
            throw ValidationError("build_initial_data: P0 must be nonnegative");
    d.P0 = std::move(P0);
    return d;
}

} // namespace lagmhd
