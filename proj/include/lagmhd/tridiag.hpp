#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lagmhd/errors.hpp"

namespace lagmhd {

/// Thomas elimination for a diagonally dominant tridiagonal system.
/// lower[0] and upper[n-1] are ignored. Overwrites rhs with the solution.
inline void solve_tridiag(std::span<const double> lower, std::span<double> diag,
                          std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw ValidationError("solve_tridiag: inconsistent band lengths");
    for (std::size_t i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::abs(lower[i]) : 0.0) +
                           (i + 1 < n ? std::abs(upper[i]) : 0.0);
        if (!(std::abs(diag[i]) > off) || !std::isfinite(diag[i]))
            throw NumericalError("solve_tridiag: matrix not strictly diagonally dominant", i, 0.0);
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

} // namespace lagmhd
