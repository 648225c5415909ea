#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lagmhd/errors.hpp"
#include "lagmhd/grid.hpp"

namespace lagmhd {

namespace detail {

/// Neumaier compensated accumulator. Fixed summation order makes every
/// reduction bitwise reproducible.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

inline void check_len(std::span<const double> f, const Grid& g, const char* who) {
    if (f.size() != g.N)
        throw ValidationError(std::string(who) + ": array length does not match grid");
}

} // namespace detail

/// d/dy with second-order central stencils inside and second-order one-sided
/// stencils at the two boundary nodes. Exact on linear fields everywhere.
inline std::vector<double> ddy(std::span<const double> f, const Grid& g) {
    detail::check_len(f, g, "ddy");
    const std::size_t n = g.N;
    std::vector<double> d(n);
    const double inv2 = 1.0 / (2.0 * g.dy);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (f[i + 1] - f[i - 1]) * inv2;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
    return d;
}

/// Flux-form viscous divergence D-(coeff * D+phi / J_face) with arithmetic
/// face averaging of J. Interior nodes only; the two boundary entries are
/// left at zero for the solver's boundary policy to fill.
inline std::vector<double> viscous_div(std::span<const double> phi, std::span<const double> J,
                                       double coeff, const Grid& g) {
    detail::check_len(phi, g, "viscous_div");
    detail::check_len(J, g, "viscous_div");
    const std::size_t n = g.N;
    for (std::size_t i = 0; i < n; ++i)
        if (!(J[i] > 0.0))
            throw NumericalError("viscous_div: nonpositive Jacobian", i, 0.0);
    std::vector<double> out(n, 0.0);
    const double inv = 1.0 / g.dy;
    // face flux at i+1/2: coeff*(phi[i+1]-phi[i]) / (dy * (J[i]+J[i+1])/2)
    auto face = [&](std::size_t i) {
        return coeff * (phi[i + 1] - phi[i]) * inv * 2.0 / (J[i] + J[i + 1]);
    };
    double left = face(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double right = face(i);
        out[i] = (right - left) * inv;
        left = right;
    }
    return out;
}

/// Trapezoid quadrature over [-L, L], left-to-right with compensated
/// accumulation; identical inputs give bitwise identical results.
inline double integrate(std::span<const double> f, const Grid& g) {
    detail::check_len(f, g, "integrate");
    detail::CompensatedSum acc;
    acc.add(0.5 * f[0]);
    for (std::size_t i = 1; i + 1 < g.N; ++i)
        acc.add(f[i]);
    acc.add(0.5 * f[g.N - 1]);
    return acc.value() * g.dy;
}

/// sqrt( integral of weight * f^2 ).
inline double weighted_l2(std::span<const double> f, std::span<const double> weight,
                          const Grid& g) {
    detail::check_len(f, g, "weighted_l2");
    detail::check_len(weight, g, "weighted_l2");
    detail::CompensatedSum acc;
    auto term = [&](std::size_t i) {
        if (weight[i] < 0.0)
            throw ValidationError("weighted_l2: negative weight");
        return weight[i] * f[i] * f[i];
    };
    acc.add(0.5 * term(0));
    for (std::size_t i = 1; i + 1 < g.N; ++i)
        acc.add(term(i));
    acc.add(0.5 * term(g.N - 1));
    return std::sqrt(acc.value() * g.dy);
}

/// Two-component overload: sum of squares of the components under one weight.
inline double weighted_l2(std::span<const double> fx, std::span<const double> fy,
                          std::span<const double> weight, const Grid& g) {
    detail::check_len(fx, g, "weighted_l2");
    detail::check_len(fy, g, "weighted_l2");
    detail::check_len(weight, g, "weighted_l2");
    detail::CompensatedSum acc;
    auto term = [&](std::size_t i) {
        if (weight[i] < 0.0)
            throw ValidationError("weighted_l2: negative weight");
        return weight[i] * (fx[i] * fx[i] + fy[i] * fy[i]);
    };
    acc.add(0.5 * term(0));
    for (std::size_t i = 1; i + 1 < g.N; ++i)
        acc.add(term(i));
    acc.add(0.5 * term(g.N - 1));
    return std::sqrt(acc.value() * g.dy);
}

/// Plain L2 norm (unit weight).
inline double l2_norm(std::span<const double> f, const Grid& g) {
    detail::CompensatedSum acc;
    acc.add(0.5 * f[0] * f[0]);
    for (std::size_t i = 1; i + 1 < g.N; ++i)
        acc.add(f[i] * f[i]);
    acc.add(0.5 * f[g.N - 1] * f[g.N - 1]);
    return std::sqrt(acc.value() * g.dy);
}

} // namespace lagmhd
