#pragma once

#include <cmath>
#include <limits>

#include "lagmhd/errors.hpp"

namespace lagmhd {

/// Adiabatic exponent from the gas constant and specific heat.
inline double gamma_of(double R, double cv) {
    if (!(R > 0.0) || !(cv > 0.0))
        throw ValidationError("gamma_of: R and cv must be positive");
    return R / cv + 1.0;
}

/// Physical constants: effective longitudinal viscosity lambda, shear
/// viscosity mu, ideal-gas constants, and the entropy-pressure constant A
/// in P = A exp(s/cv) rho^gamma.
struct PhysParams {
    double lambda = 1.0;
    double mu = 1.0;
    double gamma = 1.4;
    double R = 0.4;
    double cv = 1.0;
    double A = 1.0;

    /// Builds a validated parameter set with gamma derived from R and cv.
    static PhysParams make(double lambda, double mu, double R, double cv, double A) {
        PhysParams p;
        p.lambda = lambda;
        p.mu = mu;
        p.R = R;
        p.cv = cv;
        p.A = A;
        p.gamma = gamma_of(R, cv);
        p.validate();
        return p;
    }

    void validate() const {
        if (!(lambda > 0.0)) throw ValidationError("PhysParams: lambda must be positive");
        if (!(mu > 0.0)) throw ValidationError("PhysParams: mu must be positive");
        if (!(R > 0.0)) throw ValidationError("PhysParams: R must be positive");
        if (!(cv > 0.0)) throw ValidationError("PhysParams: cv must be positive");
        if (!(A > 0.0)) throw ValidationError("PhysParams: A must be positive");
        const double expected = R / cv + 1.0;
        if (!(gamma > 1.0) || std::abs(gamma - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
            throw ValidationError("PhysParams: gamma inconsistent with R/cv + 1");
    }
};

/// Pointwise thermodynamic state. Entropy lacks an expression where the gas
/// is at vacuum or pressure vanishes; such points carry defined flags instead
/// of sentinel values.
struct ThermoPoint {
    double rho = 0.0;
    double theta = 0.0;
    double s = 0.0;
    bool theta_defined = false;
    bool s_defined = false;
};

/// Density, temperature, and entropy from (P, rho0, J).
/// rho = rho0/J, theta = P/(R rho), s = cv ln(P/(A rho^gamma)).
inline ThermoPoint thermo_point(double P, double rho0, double J, const PhysParams& pp) {
    if (!(J > 0.0))
        throw NumericalError("thermo_point: nonpositive Jacobian");
    ThermoPoint t;
    t.rho = rho0 / J;
    if (t.rho > 0.0) {
        t.theta = P / (pp.R * t.rho);
        t.theta_defined = true;
        if (P > 0.0) {
            t.s = pp.cv * std::log(P / (pp.A * std::pow(t.rho, pp.gamma)));
            t.s_defined = true;
        }
    }
    return t;
}

/// Inverts the entropy relation: P = A exp(s/cv) rho^gamma.
inline double pressure_from_entropy(double s, double rho, const PhysParams& pp) {
    if (!(rho > 0.0))
        throw ValidationError("pressure_from_entropy: rho must be positive");
    return pp.A * std::exp(s / pp.cv) * std::pow(rho, pp.gamma);
}

} // namespace lagmhd
