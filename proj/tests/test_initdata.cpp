#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lagmhd/hypotheses.hpp"
#include "lagmhd/initial_data.hpp"

using namespace lagmhd;

namespace {
const PhysParams pp = PhysParams::make(1.0, 1.0, 0.4, 1.0, 1.0);
}

TEST_CASE("power-law density profile") {
    SECTION("constant") {
        const DensityProfile p = power_law_density(1.0, 0.0);
        CHECK(p.value(3.7) == 1.0);
        CHECK(p.derivative(3.7) == 0.0);
        CHECK(p.slow_decay_ok);
    }
    SECTION("quadratic decay at y = 1") {
        const DensityProfile p = power_law_density(1.0, 2.0);
        CHECK(p.value(1.0) == Catch::Approx(0.5).epsilon(1e-15));
        CHECK(p.derivative(1.0) == Catch::Approx(-0.5).epsilon(1e-14));
        CHECK(p.slow_decay_ok);
    }
    SECTION("fast decay constructed but flagged") {
        const DensityProfile p = power_law_density(1.0, 3.0);
        CHECK_FALSE(p.slow_decay_ok);
        CHECK(p.value(0.0) == 1.0);
    }
    CHECK_THROWS_AS(power_law_density(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(power_law_density(1.0, -0.5), ValidationError);
}

TEST_CASE("bump fields are exactly zero outside support") {
    const BumpSpec b{0.5, 1.5, 0.2};
    CHECK(b(0.5) == Catch::Approx(0.2).epsilon(1e-15));
    CHECK(b(2.0) == 0.0);   // support edge
    CHECK(b(2.0001) == 0.0);
    CHECK(b(-1.0) == 0.0);
    CHECK(b(-10.0) == 0.0);
    CHECK(b(1.9) > 0.0);
}

TEST_CASE("build_initial_data") {
    const Grid g = Grid::make(8.0, 257);
    const DensityProfile prof = power_law_density(1.0, 2.0);

    SECTION("rest data from zero amplitudes") {
        BumpSet bumps; // all amplitude 0
        const InitialData d = build_initial_data(prof, bumps, pp, g);
        for (std::size_t i = 0; i < g.N; ++i) {
            CHECK(d.J0[i] == 1.0);
            CHECK(d.u0[i] == 0.0);
            CHECK(d.w0[0][i] == 0.0);
            CHECK(d.h0[1][i] == 0.0);
            CHECK(d.P0[i] > 0.0);
        }
    }

    SECTION("constant-entropy pressure: thermo entropy is 1 everywhere") {
        BumpSet bumps;
        bumps.u0 = {1.0, 2.0, 0.1};
        const InitialData d = build_initial_data(prof, bumps, pp, g, 1.0);
        for (std::size_t i = 0; i < g.N; ++i) {
            const ThermoPoint t = thermo_point(d.P0[i], d.geo->rho0[i], 1.0, pp);
            REQUIRE(t.s_defined);
            CHECK(std::abs(t.s - 1.0) <= 1e-12);
        }
    }

    SECTION("support touching the margin is rejected") {
        BumpSet bumps;
        bumps.u0 = {5.0, 1.5, 0.1}; // support ends at 6.5 > 0.75*8 = 6
        CHECK_THROWS_AS(build_initial_data(prof, bumps, pp, g), ValidationError);
    }

    SECTION("bumps are bitwise zero outside support on the grid") {
        BumpSet bumps;
        bumps.u0 = {0.0, 2.0, 0.1};
        const InitialData d = build_initial_data(prof, bumps, pp, g);
        for (std::size_t i = 0; i < g.N; ++i)
            if (std::abs(g.y[i]) >= 2.0)
                CHECK(d.u0[i] == 0.0);
    }
}

TEST_CASE("hypothesis validation on power-law profiles") {
    const Grid g = Grid::make(16.0, 513);
    HypothesisOptions opt;

    SECTION("constant density: all flags hold, K1 = 0") {
        const DensityProfile prof = power_law_density(1.0, 0.0);
        const InitialData d = build_initial_data(prof, BumpSet{}, pp, g);
        const HypothesisReport r = validate_hypotheses(prof, d, pp.gamma, pp, opt);
        CHECK(r.K1 == 0.0);
        CHECK(r.h1_ok);
        CHECK(r.h2_ok);
        CHECK(r.h3_ok);
        CHECK(r.h4_ok);
        CHECK(r.star_ok);
    }

    SECTION("quadratic decay: slow-decay constant converges to 2/sqrt(Krho)") {
        const double Krho = 0.7;
        const DensityProfile prof = power_law_density(Krho, 2.0);
        const InitialData d = build_initial_data(prof, BumpSet{}, pp, g);
        const HypothesisReport r = validate_hypotheses(prof, d, pp.gamma, pp, opt);
        CHECK(r.h3_ok);
        CHECK(r.star_ok);
        // sup of (2/sqrt(K)) |y| <y>^{-1} approaches 2/sqrt(K) from below
        CHECK(r.K1 <= 2.0 / std::sqrt(Krho) + 1e-12);
        CHECK(r.K1 == Catch::Approx(2.0 / std::sqrt(Krho)).epsilon(0.01));
        // the (*) infimum equals Krho (attained at y = 0 and asymptotically)
        CHECK(r.A0 == Catch::Approx(Krho).epsilon(1e-12));
    }

    SECTION("fast decay: doubling divergence flips h3") {
        for (double ell : {2.25, 2.5}) {
            const DensityProfile prof = power_law_density(1.0, ell);
            const InitialData d = build_initial_data(prof, BumpSet{}, pp, g);
            const HypothesisReport r = validate_hypotheses(prof, d, pp.gamma, pp, opt);
            CHECK_FALSE(r.h3_ok);
            CHECK(r.doubling_ratio.at("K1") > 1.01);
        }
    }

    SECTION("intermediate decay rates keep h3") {
        const DensityProfile prof = power_law_density(1.0, 1.0);
        const InitialData d = build_initial_data(prof, BumpSet{}, pp, g);
        const HypothesisReport r = validate_hypotheses(prof, d, pp.gamma, pp, opt);
        CHECK(r.h3_ok);
    }
}

TEST_CASE("tabulated profile round-trip reproduces K1") {
    const Grid g = Grid::make(8.0, 257);
    const DensityProfile pl = power_law_density(1.3, 1.5);
    std::vector<DensitySample> samples(g.N);
    for (std::size_t i = 0; i < g.N; ++i)
        samples[i] = {g.y[i], pl.value(g.y[i]), pl.derivative(g.y[i])};
    const DensityProfile tab = tabulated_density(std::move(samples));

    const InitialData dpl = build_initial_data(pl, BumpSet{}, pp, g);
    const InitialData dtab = build_initial_data(tab, BumpSet{}, pp, g);
    const HypothesisReport rpl = validate_hypotheses(pl, dpl, 1.0, pp);
    const HypothesisReport rtab = validate_hypotheses(tab, dtab, 1.0, pp);
    CHECK(std::abs(rpl.K1 - rtab.K1) <= 1e-12 * rpl.K1);
    CHECK_FALSE(rtab.doubling_available);
}

TEST_CASE("grid mismatch is a shape error") {
    const Grid g = Grid::make(8.0, 257);
    const Grid g2 = Grid::make(8.0, 129);
    const DensityProfile prof = power_law_density(1.0, 2.0);
    InitialData d = build_initial_data(prof, BumpSet{}, pp, g);
    d.u0.resize(g2.N); // corrupt
    CHECK_THROWS_AS(validate_hypotheses(prof, d, 1.0, pp), ValidationError);
}
