#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lagmhd/core.hpp"

using namespace lagmhd;

TEST_CASE("gamma_of") {
    CHECK(gamma_of(0.4, 1.0) == Catch::Approx(1.4).epsilon(1e-15));
    CHECK(gamma_of(1.0, 1.0) == Catch::Approx(2.0).epsilon(1e-15));
    CHECK(gamma_of(2.0 / 3.0, 1.0) == Catch::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(gamma_of(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(gamma_of(0.4, -1.0), ValidationError);
}

TEST_CASE("PhysParams rejects inconsistent gamma") {
    PhysParams p = PhysParams::make(1.0, 1.0, 0.4, 1.0, 1.0);
    CHECK(p.gamma == Catch::Approx(1.4).epsilon(1e-15));
    p.gamma = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    PhysParams q = PhysParams::make(2.0, 0.5, 1.0, 2.0, 3.0);
    CHECK(q.gamma == Catch::Approx(1.5).epsilon(1e-15));
    CHECK_NOTHROW(q.validate());
}

TEST_CASE("thermo_point") {
    const PhysParams pp = PhysParams::make(1.0, 1.0, 0.4, 1.0, 1.0);

    SECTION("constant-entropy seed gives s = 1") {
        // P = A e^{1/cv} rho0^gamma at J = 1
        const double rho0 = 1.0;
        const double P = pp.A * std::exp(1.0 / pp.cv) * std::pow(rho0, pp.gamma);
        const ThermoPoint t = thermo_point(P, rho0, 1.0, pp);
        REQUIRE(t.s_defined);
        CHECK(t.s == Catch::Approx(1.0).margin(1e-14));
    }

    SECTION("zero pressure: theta = 0, entropy undefined") {
        const ThermoPoint t = thermo_point(0.0, 1.0, 1.0, pp);
        REQUIRE(t.theta_defined);
        CHECK(t.theta == 0.0);
        CHECK_FALSE(t.s_defined);
    }

    SECTION("frozen reference point") {
        // P=2, rho0=1, J=2 -> rho=1/2, theta=10, s=ln(2/0.5^1.4)=2.4 ln 2
        const ThermoPoint t = thermo_point(2.0, 1.0, 2.0, pp);
        CHECK(t.rho == Catch::Approx(0.5).epsilon(1e-15));
        CHECK(t.theta == Catch::Approx(10.0).epsilon(1e-14));
        REQUIRE(t.s_defined);
        CHECK(t.s == Catch::Approx(1.6635532333438687).epsilon(1e-14));
    }

    SECTION("nonpositive Jacobian is state corruption") {
        CHECK_THROWS_AS(thermo_point(1.0, 1.0, 0.0, pp), NumericalError);
        CHECK_THROWS_AS(thermo_point(1.0, 1.0, -1.0, pp), NumericalError);
    }
}

TEST_CASE("pressure_from_entropy") {
    const PhysParams pp = PhysParams::make(1.0, 1.0, 0.4, 1.0, 1.0);
    CHECK(pressure_from_entropy(0.0, 1.0, pp) == Catch::Approx(pp.A).epsilon(1e-15));
    const double rho0 = 0.7;
    CHECK(pressure_from_entropy(pp.cv, rho0, pp) ==
          Catch::Approx(pp.A * std::exp(1.0) * std::pow(rho0, pp.gamma)).epsilon(1e-15));
    CHECK_THROWS_AS(pressure_from_entropy(0.0, 0.0, pp), ValidationError);
}

TEST_CASE("entropy round-trips with pressure on random points") {
    const PhysParams pp = PhysParams::make(2.0, 0.7, 0.5, 1.25, 0.8);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uP(1e-6, 50.0);
    std::uniform_real_distribution<double> urho(1e-6, 5.0);
    std::uniform_real_distribution<double> uJ(0.1, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const double rho0 = urho(rng);
        const double J = uJ(rng);
        const double P = uP(rng);
        const ThermoPoint t = thermo_point(P, rho0, J, pp);
        REQUIRE(t.s_defined);
        const double Pback = pressure_from_entropy(t.s, rho0 / J, pp);
        CHECK(std::abs(Pback - P) <= 1e-12 * P);
    }
}

TEST_CASE("entropy monotonicity in P and rho") {
    const PhysParams pp = PhysParams::make(1.0, 1.0, 0.4, 1.0, 1.0);
    double prev = -1e300;
    for (double P = 0.5; P < 8.0; P *= 1.5) {
        const double s = thermo_point(P, 1.3, 1.0, pp).s;
        CHECK(s > prev);
        prev = s;
    }
    prev = 1e300;
    for (double rho0 = 0.2; rho0 < 4.0; rho0 *= 1.4) {
        const double s = thermo_point(2.0, rho0, 1.0, pp).s;
        CHECK(s < prev);
        prev = s;
    }
}
