#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lagmhd/errors.hpp"

namespace lagmhd {

struct OrderFit {
    double order = 0.0;
    bool monotone = true;
};

/// Least-squares slope of log(error) against log(cumulative resolution).
/// factors[k] is the refinement ratio between level k and level k+1, so
/// errors.size() == factors.size() + 1. Non-monotone error sequences are
/// flagged but still fitted.
inline OrderFit convergence_order(std::span<const double> errors,
                                  std::span<const double> factors) {
    if (errors.size() < 3)
        throw ValidationError("convergence_order: need at least 3 error levels");
    if (factors.size() + 1 != errors.size())
        throw ValidationError("convergence_order: factors must have errors.size()-1 entries");
    for (double e : errors)
        if (!(e > 0.0))
            throw ValidationError("convergence_order: errors must be positive");

    OrderFit fit;
    std::vector<double> lr(errors.size()), le(errors.size());
    double res = 1.0;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        lr[k] = std::log(res);
        le[k] = std::log(errors[k]);
        if (k + 1 < errors.size()) {
            if (errors[k + 1] >= errors[k])
                fit.monotone = false;
            res *= factors[k];
        }
    }
    const auto n = static_cast<double>(errors.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        sx += lr[k];
        sy += le[k];
        sxx += lr[k] * lr[k];
        sxy += lr[k] * le[k];
    }
    fit.order = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

} // namespace lagmhd
