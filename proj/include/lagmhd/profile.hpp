#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "lagmhd/errors.hpp"
#include "lagmhd/grid.hpp"

namespace lagmhd {

/// One tabulated density sample: position, value, derivative.
struct DensitySample {
    double y = 0.0;
    double rho0 = 0.0;
    double drho0 = 0.0;
};

enum class ProfileKind { PowerLaw, Tabulated };

/// Fixed Lagrangian density rho0(y) with its exact derivative. The power-law
/// family is Krho / <y>^ell with <y> = sqrt(1 + y^2); decay exponents above 2
/// are representable (for negative tests) but flagged as outside the
/// slow-decay range.
struct DensityProfile {
    ProfileKind kind = ProfileKind::PowerLaw;
    double Krho = 1.0;
    double ell = 0.0;
    bool slow_decay_ok = true; // true iff 0 <= ell <= 2
    std::vector<DensitySample> samples; // tabulated kind only

    double value(double y) const {
        if (kind == ProfileKind::PowerLaw)
            return Krho * std::pow(1.0 + y * y, -0.5 * ell);
        return interp(y).rho0;
    }

    double derivative(double y) const {
        if (kind == ProfileKind::PowerLaw) {
            // d/dy [ K <y>^-ell ] = -ell K y <y>^(-ell-2)
            return -ell * Krho * y * std::pow(1.0 + y * y, -0.5 * (ell + 2.0));
        }
        return interp(y).drho0;
    }

    DensitySample interp(double y) const {
        if (samples.size() < 2)
            throw ValidationError("DensityProfile: tabulated profile needs >= 2 samples");
        if (y <= samples.front().y) return samples.front();
        if (y >= samples.back().y) return samples.back();
        std::size_t lo = 0, hi = samples.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (samples[mid].y <= y ? lo : hi) = mid;
        }
        const auto& a = samples[lo];
        const auto& b = samples[hi];
        const double t = (y - a.y) / (b.y - a.y);
        return {y, a.rho0 + t * (b.rho0 - a.rho0), a.drho0 + t * (b.drho0 - a.drho0)};
    }
};

inline DensityProfile power_law_density(double Krho, double ell) {
    if (!(Krho > 0.0))
        throw ValidationError("power_law_density: Krho must be positive");
    if (!(ell >= 0.0))
        throw ValidationError("power_law_density: ell must be nonnegative");
    DensityProfile p;
    p.kind = ProfileKind::PowerLaw;
    p.Krho = Krho;
    p.ell = ell;
    p.slow_decay_ok = ell <= 2.0;
    return p;
}

inline DensityProfile tabulated_density(std::vector<DensitySample> samples) {
    if (samples.size() < 2)
        throw ValidationError("tabulated_density: need >= 2 samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].y > samples[i - 1].y))
            throw ValidationError("tabulated_density: samples must be strictly increasing in y");
    for (const auto& s : samples)
        if (!(s.rho0 > 0.0))
            throw ValidationError("tabulated_density: rho0 must be positive everywhere");
    DensityProfile p;
    p.kind = ProfileKind::Tabulated;
    p.samples = std::move(samples);
    return p;
}

/// Geometry shared by every state of a run: the grid plus the sampled density
/// and its derivative. Immutable after construction.
struct GridDensity {
    Grid grid;
    std::vector<double> rho0;
    std::vector<double> drho0;
    DensityProfile profile;

    static GridDensity make(const DensityProfile& p, const Grid& g) {
        GridDensity gd;
        gd.grid = g;
        gd.profile = p;
        gd.rho0.resize(g.N);
        gd.drho0.resize(g.N);
        for (std::size_t i = 0; i < g.N; ++i) {
            gd.rho0[i] = p.value(g.y[i]);
            gd.drho0[i] = p.derivative(g.y[i]);
            if (!(gd.rho0[i] > 0.0))
                throw ValidationError("GridDensity: rho0 must be positive at every node");
        }
        return gd;
    }
};

} // namespace lagmhd
