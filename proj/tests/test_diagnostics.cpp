#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lagmhd/diagnostics.hpp"
#include "lagmhd/dilation.hpp"
#include "lagmhd/initial_data.hpp"

using namespace lagmhd;

namespace {

const PhysParams pp = PhysParams::make(1.0, 1.0, 0.4, 1.0, 1.0);

State uniform_state(double L, std::size_t N, double P0, double ell = 0.0) {
    const Grid g = Grid::make(L, N);
    State st;
    st.geo = std::make_shared<const GridDensity>(
        GridDensity::make(power_law_density(1.0, ell), g));
    st.J.assign(N, 1.0);
    st.u.assign(N, 0.0);
    st.w[0].assign(N, 0.0);
    st.w[1].assign(N, 0.0);
    st.h[0].assign(N, 0.0);
    st.h[1].assign(N, 0.0);
    st.P.assign(N, P0);
    return st;
}

} // namespace

TEST_CASE("conserved quantities") {
    SECTION("rest state with h = 0") {
        const State st = uniform_state(4.0, 129, 1.5);
        const Conserved c = conserved(st, pp);
        // E = int J P/(gamma-1) = 8 * 1.5/0.4 = 30
        CHECK(c.energy == Catch::Approx(30.0).epsilon(1e-13));
        CHECK(std::abs(c.mom_u) <= 1e-15);
        CHECK(std::abs(c.mom_w[0]) <= 1e-15);
    }
    SECTION("bump momentum equals its weighted mass") {
        State st = uniform_state(4.0, 513, 1.0);
        const Grid& g = st.grid();
        const BumpSpec b{0.0, 1.0, 1.0};
        std::vector<double> f(g.N);
        for (std::size_t i = 0; i < g.N; ++i) {
            st.u[i] = b(g.y[i]);
            f[i] = st.u[i]; // rho0 = 1
        }
        const double m = integrate(f, g);
        CHECK(conserved(st, pp).mom_u == Catch::Approx(m).epsilon(1e-14));
    }
}

TEST_CASE("jacobian lower bound check") {
    const State st = uniform_state(4.0, 65, 1.0);
    const Conserved c = conserved(st, pp);
    const double l1 = integrate(st.rho0(), st.grid());
    const JBoundCheck jb = j_bound_check(st, c.energy, l1, pp);
    CHECK(jb.Jmin == 1.0);
    CHECK(jb.J_bound < 1.0);
    CHECK(jb.ok);
}

TEST_CASE("J^gamma P monotonicity measure") {
    SECTION("identical states give zero") {
        const State st = uniform_state(4.0, 65, 1.0);
        CHECK(jgp_monotonicity(st, st, pp) == 0.0);
    }
    SECTION("exact dilation increments are nonnegative") {
        DilationParams dp{0.5, 1.0, pp};
        State prev = uniform_state(4.0, 65, 1.0);
        for (double t = 0.1; t <= 1.0; t += 0.1) {
            const DilationValue v = dilation_exact(dp, t);
            State cur = prev;
            cur.t = t;
            cur.J.assign(cur.n(), v.J);
            cur.P.assign(cur.n(), v.P);
            CHECK(jgp_monotonicity(prev, cur, pp) >= -1e-10);
            prev = cur;
        }
    }
}

TEST_CASE("weighted norm suite") {
    const Grid g = Grid::make(8.0, 513);
    BumpSet bumps;
    bumps.h0x = {0.0, 2.0, 0.3};
    bumps.u0 = {1.0, 2.0, 0.2};
    const InitialData init = build_initial_data(power_law_density(1.0, 2.0), bumps, pp, g);
    const State st = init.state();
    const DerivedFields d = derived_fields(st, pp);
    const double alpha = pp.gamma;
    const double rho_max = 1.0;

    SECTION("zero transverse fields kill the F and H norms") {
        BumpSet only_u;
        only_u.u0 = {1.0, 2.0, 0.2};
        const InitialData i2 = build_initial_data(power_law_density(1.0, 2.0), only_u, pp, g);
        const State s2 = i2.state();
        const DerivedFields d2 = derived_fields(s2, pp);
        const WeightedNorms wn = weighted_norm_suite(s2, d2, alpha, {1e-2});
        CHECK(wn.wF == 0.0);
        CHECK(wn.wH == 0.0);
        CHECK(wn.wh == 0.0);
        CHECK(wn.wG > 0.0);
    }

    SECTION("large-delta asymptotics") {
        const double big = 1e6 * rho_max;
        const WeightedNorms wn = weighted_norm_suite(st, d, alpha, {big});
        std::vector<double> q(g.N);
        for (std::size_t i = 0; i < g.N; ++i)
            q[i] = st.rho0()[i] * st.J[i] * (d.G[i] * d.G[i]);
        const double limit = std::pow(big, -(alpha + 1.0)) * integrate(q, g);
        CHECK(wn.reg[0].qG == Catch::Approx(limit).epsilon(0.01));
    }

    SECTION("ladder is monotone nonincreasing in delta") {
        const WeightedNorms wn = weighted_norm_suite(st, d, alpha, {1e-2, 1e-4, 1e-6});
        CHECK(wn.reg[0].qG <= wn.reg[1].qG + 1e-12);
        CHECK(wn.reg[1].qG <= wn.reg[2].qG + 1e-12);
        CHECK(wn.reg[0].qF <= wn.reg[1].qF + 1e-12);
        CHECK(wn.reg[1].qH <= wn.reg[2].qH + 1e-12);
        // as delta -> 0 with J = 1 the regularized F integral approaches the
        // raw weighted norm squared from below
        CHECK(wn.reg[2].qF <= wn.wF * wn.wF + 1e-12);
        CHECK(wn.reg[2].qF == Catch::Approx(wn.wF * wn.wF).epsilon(0.05));
    }
}

TEST_CASE("h1 norms") {
    SECTION("rest velocity has zero norm") {
        const State st = uniform_state(4.0, 129, 1.0);
        const DerivedFields d = derived_fields(st, pp);
        CHECK(h1_norms(st, d, 0.0).u == 0.0);
    }
    SECTION("bump H1 norm against the quadrature oracle") {
        State st = uniform_state(4.0, 2049, 1.0);
        const BumpSpec b{0.0, 1.0, 1.0};
        for (std::size_t i = 0; i < st.n(); ++i)
            st.u[i] = b(st.grid().y[i]);
        const DerivedFields d = derived_fields(st, pp);
        const H1Norms h = h1_norms(st, d, 0.0);
        CHECK(h.u == Catch::Approx(2.0024591337181045).epsilon(2e-3));
    }
}

TEST_CASE("entropy extrema respect the density floor") {
    const Grid g = Grid::make(8.0, 257);
    const InitialData init = build_initial_data(power_law_density(1.0, 2.0), BumpSet{}, pp, g);
    const State st = init.state();
    const DerivedFields d = derived_fields(st, pp);
    const EntropyExtrema e = entropy_extrema(st, d, power_law_density(1.0, 2.0).value(0.9 * 8.0));
    CHECK(e.counted > 0);
    CHECK(e.counted < g.N);
    CHECK(e.s_sup == Catch::Approx(1.0).margin(1e-12));
    CHECK(e.s_inf == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("offline jacobian consistency on the dilation flow") {
    DilationParams dp{0.5, 1.0, pp};
    auto traj_with_dt = [&](double dt, std::size_t count) {
        std::vector<State> traj;
        std::vector<DerivedFields> der;
        for (std::size_t k = 0; k < count; ++k) {
            const double t = k * dt;
            const DilationValue v = dilation_exact(dp, t);
            State st = uniform_state(4.0, 65, 1.0);
            st.t = t;
            st.J.assign(st.n(), v.J);
            st.P.assign(st.n(), v.P);
            for (std::size_t i = 0; i < st.n(); ++i)
                st.u[i] = dp.a * st.grid().y[i];
            der.push_back(derived_fields(st, pp));
            traj.push_back(std::move(st));
        }
        return j_consistency(traj, der, pp);
    };
    const double c1 = traj_with_dt(0.02, 26);  // to t = 0.5
    const double c2 = traj_with_dt(0.01, 51);
    CHECK(c1 > 0.0);
    CHECK(c1 / c2 == Catch::Approx(4.0).margin(0.5)); // trapezoid is O(dt^2)
    CHECK(c2 <= 1e-5);
}

TEST_CASE("difference functional") {
    const State a = uniform_state(4.0, 129, 1.0);
    SECTION("identical states") { CHECK(difference_functional(a, a) == 0.0); }
    SECTION("constant velocity shift") {
        State b = a;
        const double eps = 1e-3;
        for (std::size_t i = 0; i < b.n(); ++i)
            b.u[i] = a.u[i] + eps;
        const double l1 = integrate(a.rho0(), a.grid());
        CHECK(difference_functional(a, b) == Catch::Approx(eps * eps * l1).epsilon(1e-12));
    }
    SECTION("time mismatch rejected") {
        State b = a;
        b.t = 1.0;
        CHECK_THROWS_AS(difference_functional(a, b), ValidationError);
    }
}
