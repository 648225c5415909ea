#pragma once

#include <cstddef>
#include <vector>

#include "lagmhd/errors.hpp"

namespace lagmhd {

/// Uniform grid on [-L, L] with an odd node count so y = 0 is a node.
/// Nodes are generated as (i - M)*dy with M = (N-1)/2, which makes the
/// coordinate array bitwise symmetric: y[i] == -y[N-1-i].
struct Grid {
    double L = 1.0;
    std::size_t N = 3;
    double dy = 1.0;
    std::vector<double> y;

    static Grid make(double L, std::size_t N) {
        if (!(L > 0.0)) throw ValidationError("Grid: L must be positive");
        if (N < 3 || N % 2 == 0) throw ValidationError("Grid: N must be odd and >= 3");
        Grid g;
        g.L = L;
        g.N = N;
        g.dy = 2.0 * L / static_cast<double>(N - 1);
        g.y.resize(N);
        const auto M = static_cast<std::ptrdiff_t>((N - 1) / 2);
        for (std::size_t i = 0; i < N; ++i)
            g.y[i] = static_cast<double>(static_cast<std::ptrdiff_t>(i) - M) * g.dy;
        return g;
    }

    bool same_as(const Grid& o) const { return N == o.N && L == o.L; }
};

} // namespace lagmhd
