#pragma once

#include <array>
#include <memory>
#include <vector>

#include "lagmhd/profile.hpp"

namespace lagmhd {

/// Two-component transverse field (velocity w or magnetic field h).
using Vec2Field = std::array<std::vector<double>, 2>;

/// Evolved fields at one time on the shared geometry. Copies are deep for the
/// field arrays and shared for the immutable geometry, so snapshots are cheap
/// to take and safe to read concurrently.
struct State {
    double t = 0.0;
    std::vector<double> J;
    std::vector<double> u;
    Vec2Field w;
    Vec2Field h;
    std::vector<double> P;
    std::shared_ptr<const GridDensity> geo;

    const Grid& grid() const { return geo->grid; }
    const std::vector<double>& rho0() const { return geo->rho0; }
    std::size_t n() const { return geo->grid.N; }
};

} // namespace lagmhd
