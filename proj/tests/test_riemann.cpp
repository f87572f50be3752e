#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tpfv/riemann.hpp"

using namespace tpfv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const PhaseEos air{1.4, 0.0};
const PhaseEos water{4.4, 6e8};

// Both phases carry the same gas state, so the mixture behaves like a
// single-phase ideal gas with that (rho, u, p).
FaceSide gas_side(double rho, double u, double p) {
    const PrimitiveState w{0.5, rho, rho, u, 0.0, p, p};
    return make_face_side(w, 1.0, 0.0, air, air);
}

std::array<double, 5> analytic_flux(const FaceSide& k) {
    return {k.m1() * k.un, k.m2() * k.un, k.rho * k.un * k.un + k.p,
            k.rho * k.un * k.ut, (k.rhoE + k.p) * k.un};
}

PrimitiveState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> ua(1e-6, 1.0 - 1e-6);
    std::uniform_real_distribution<double> ur1(0.05, 20.0), ur2(200.0, 1800.0);
    std::uniform_real_distribution<double> uu(-800.0, 800.0);
    std::uniform_real_distribution<double> up(2e4, 8e6);
    return {ua(rng), ur1(rng), ur2(rng), uu(rng), uu(rng), up(rng), up(rng)};
}

// Extreme jumps can drive the star compression past the stiff phase's
// Hugoniot pole, which is a deliberate error path; property loops over
// unconstrained random pairs skip those.
bool try_solve(const FaceSide& l, const FaceSide& r, bool corr, InterfaceSolution& out) {
    try {
        out = hllc_interface_solution(l, r, air, water, corr);
        return true;
    } catch (const SolverError& err) {
        REQUIRE(err.code() == ErrorCode::hugoniot_limit);
        return false;
    }
}

} // namespace

TEST_CASE("face side assembly, frozen values") {
    const PrimitiveState w{0.5, 1.0, 1000.0, 10.0, -2.0, 2e5, 1e5};
    const FaceSide s = make_face_side(w, 0.6, 0.8, air, water);
    CHECK_THAT(s.un, WithinRel(4.4000000000000004, 1e-15));
    CHECK_THAT(s.ut, WithinRel(-9.1999999999999993, 1e-15));
    CHECK(s.rho == 500.5);
    CHECK(s.p == 150000.0);
    CHECK_THAT(s.ie1, WithinRel(250000.00000000006, 1e-14));
    CHECK_THAT(s.ie2, WithinRel(388249999.99999994, 1e-14));
    CHECK_THAT(s.a, WithinRel(1624.2173247696621, 1e-13));
    CHECK_THAT(s.rhoE, WithinRel(388526025.99999994, 1e-13));
    CHECK(s.m1() == 0.5);
    CHECK(s.m2() == 500.0);
}

TEST_CASE("Davis wave speeds") {
    SECTION("identical states at rest") {
        FaceSide k{};
        k.un = 0.0;
        k.a = 100.0;
        double SL, SR;
        davis_wave_speeds(k, k, SL, SR);
        CHECK(SL == -100.0);
        CHECK(SR == 100.0);
    }
    SECTION("identical moving states") {
        FaceSide k{};
        k.un = 50.0;
        k.a = 100.0;
        double SL, SR;
        davis_wave_speeds(k, k, SL, SR);
        CHECK(SL == -50.0);
        CHECK(SR == 150.0);
    }
    SECTION("shock-tube pair, frozen values") {
        const FaceSide l = gas_side(1.92691, -114.42, 156980.0);
        const FaceSide r = gas_side(1.4, 0.0, 1e5);
        double SL, SR;
        davis_wave_speeds(l, r, SL, SR);
        CHECK_THAT(SL, WithinRel(-452.13897689236177, 1e-13));
        CHECK_THAT(SR, WithinRel(316.22776601683796, 1e-13));
    }
}

TEST_CASE("contact wave speed") {
    SECTION("identical states move with the flow") {
        const FaceSide k = gas_side(1.2, 37.5, 2e5);
        double SL, SR;
        davis_wave_speeds(k, k, SL, SR);
        CHECK_THAT(contact_wave_speed(k, k, SL, SR), WithinAbs(37.5, 1e-12));
    }
    SECTION("head-on collision of mirrored states is pinned at zero") {
        const FaceSide l = gas_side(1.0, 250.0, 1e5);
        const FaceSide r = gas_side(1.0, -250.0, 1e5);
        double SL, SR;
        davis_wave_speeds(l, r, SL, SR);
        CHECK(contact_wave_speed(l, r, SL, SR) == 0.0);
    }
    SECTION("frozen shock-tube value") {
        const FaceSide l = gas_side(1.0, 0.0, 1e5);
        const FaceSide r = gas_side(0.125, 0.0, 1e4);
        double SL, SR;
        davis_wave_speeds(l, r, SL, SR);
        CHECK_THAT(contact_wave_speed(l, r, SL, SR),
                   WithinRel(213.80899352993953, 1e-13));
    }
    SECTION("degenerate denominator falls back to the velocity average") {
        RunStats stats;
        const FaceSide l = gas_side(1.0, 10.0, 1e5);
        const FaceSide r = gas_side(1.0, 20.0, 1e5);
        // wave speeds equal to the flow speeds zero out both mass factors
        const double s = contact_wave_speed(l, r, l.un, r.un, &stats);
        CHECK(s == 15.0);
        CHECK(stats.sstar_fallbacks.load() == 1);
    }
}

TEST_CASE("flux consistency on equal states") {
    std::mt19937 rng(404);
    for (int i = 0; i < 2000; ++i) {
        const PrimitiveState w = random_state(rng);
        for (bool corr : {false, true}) {
            const FaceSide s = make_face_side(w, 0.8, -0.6, air, water);
            const auto ref = analytic_flux(s);
            const auto sol = hllc_interface_solution(s, s, air, water, corr);
            const double speed = std::abs(s.un) + s.a;
            const std::array<double, 5> scale = {s.m1(), s.m2(), s.rho * speed,
                                                 s.rho * speed, s.rhoE};
            for (int n = 0; n < 5; ++n)
                REQUIRE_THAT(sol.flux[n],
                             WithinAbs(ref[n], 1e-12 * (std::abs(ref[n]) + speed * scale[n])));
            REQUIRE_THAT(sol.un, WithinAbs(s.un, 1e-12 * speed));
        }
    }
}

TEST_CASE("stationary contact is resolved exactly") {
    const PrimitiveState wl{0.25, 1.0, 900.0, 0.0, 0.0, 1e5, 1e5};
    const PrimitiveState wr{0.75, 2.0, 1100.0, 0.0, 0.0, 1e5, 1e5};
    const FaceSide l = make_face_side(wl, 1.0, 0.0, air, water);
    const FaceSide r = make_face_side(wr, 1.0, 0.0, air, water);
    REQUIRE(l.p == 1e5);
    REQUIRE(r.p == 1e5);
    for (bool corr : {false, true}) {
        const auto sol = hllc_interface_solution(l, r, air, water, corr);
        CHECK(sol.flux[0] == 0.0);
        CHECK(sol.flux[1] == 0.0);
        CHECK(sol.flux[2] == 1e5);
        CHECK(sol.flux[3] == 0.0);
        CHECK(sol.flux[4] == 0.0);
        CHECK(sol.un == 0.0);
        CHECK(sol.alpha1_un == 0.0);
        CHECK(sol.ie1_un == 0.0);
        CHECK(sol.ie2_un == 0.0);
    }
}

TEST_CASE("supersonic faces take the raw upwind flux") {
    SECTION("fast flow to the right") {
        const FaceSide l = gas_side(1.0, 800.0, 1e5);
        const FaceSide r = gas_side(0.9, 790.0, 9e4);
        const auto sol = hllc_interface_solution(l, r, air, air, true);
        CHECK(sol.SL > 0.0);
        const auto ref = analytic_flux(l);
        for (int n = 0; n < 5; ++n) CHECK(sol.flux[n] == ref[n]);
        CHECK(sol.un == l.un);
        CHECK(sol.alpha1_un == l.alpha1 * l.un);
        CHECK(sol.ie1_un == l.ie1 * l.un);
    }
    SECTION("fast flow to the left") {
        const FaceSide l = gas_side(1.0, -800.0, 1e5);
        const FaceSide r = gas_side(0.9, -790.0, 9e4);
        const auto sol = hllc_interface_solution(l, r, air, air, true);
        CHECK(sol.SR < 0.0);
        const auto ref = analytic_flux(r);
        for (int n = 0; n < 5; ++n) CHECK(sol.flux[n] == ref[n]);
        CHECK(sol.un == r.un);
    }
}

TEST_CASE("frozen shock-tube interface solution") {
    const FaceSide l = gas_side(1.0, 0.0, 1e5);
    const FaceSide r = gas_side(0.125, 0.0, 1e4);
    for (bool corr : {false, true}) { // zero velocities make the correction a no-op
        const auto sol = hllc_interface_solution(l, r, air, air, corr);
        CHECK_THAT(sol.SL, WithinRel(-374.16573867739413, 1e-13));
        CHECK_THAT(sol.SR, WithinRel(374.16573867739413, 1e-13));
        CHECK_THAT(sol.Sstar, WithinRel(213.80899352993953, 1e-13));
        CHECK_THAT(sol.flux[0], WithinRel(68.030134304980749, 1e-12));
        CHECK_THAT(sol.flux[1], WithinRel(68.030134304980749, 1e-12));
        CHECK_THAT(sol.flux[2], WithinRel(49090.909090909081, 1e-12));
        CHECK(sol.flux[3] == 0.0);
        CHECK_THAT(sol.flux[4], WithinRel(36736272.524689615, 1e-12));
        CHECK_THAT(sol.un, WithinRel(213.80899352993953, 1e-13));
        CHECK_THAT(sol.alpha1_un, WithinRel(106.90449676496976, 1e-13));
        CHECK_THAT(sol.ie1_un, WithinRel(14042539.829296881, 1e-12));
        CHECK_THAT(sol.ie2_un, WithinRel(14042539.829296881, 1e-12));
    }
}

TEST_CASE("velocity-jump scaling") {
    SECTION("frozen example") {
        FaceSide l = gas_side(1000.0, 10.0, 1e5);
        FaceSide r = gas_side(1000.0, 12.0, 1e5);
        l.a = 1500.0; // pin the sound speeds so f is exact
        r.a = 1500.0;
        const double f = low_mach_factor(l, r);
        CHECK(f == 0.008);
        low_mach_reconstruct(l, r, f);
        CHECK(l.un == 10.992);
        CHECK(r.un == 11.008);
        CHECK(l.ut == 0.0);
        CHECK(r.ut == 0.0);
    }
    SECTION("no jump leaves the sides untouched") {
        FaceSide l = gas_side(1.0, 25.0, 1e5);
        FaceSide r = l;
        low_mach_reconstruct(l, r, 0.37);
        CHECK(l.un == 25.0);
        CHECK(r.un == 25.0);
        CHECK(l.rhoE == r.rhoE);
    }
    SECTION("average preserved, jump contracted, energy refreshed") {
        std::mt19937 rng(909);
        std::uniform_real_distribution<double> uf(0.0, 1.0);
        for (int i = 0; i < 2000; ++i) {
            FaceSide l = make_face_side(random_state(rng), 1.0, 0.0, air, water);
            FaceSide r = make_face_side(random_state(rng), 1.0, 0.0, air, water);
            const double f = uf(rng);
            const double sum_n = l.un + r.un, sum_t = l.ut + r.ut;
            const double jump_n = r.un - l.un, jump_t = r.ut - l.ut;
            const double vmax = std::abs(l.un) + std::abs(r.un) +
                                std::abs(l.ut) + std::abs(r.ut);
            low_mach_reconstruct(l, r, f);
            REQUIRE_THAT(l.un + r.un, WithinAbs(sum_n, 1e-14 * vmax));
            REQUIRE_THAT(l.ut + r.ut, WithinAbs(sum_t, 1e-14 * vmax));
            REQUIRE_THAT(r.un - l.un, WithinAbs(f * jump_n, 1e-14 * vmax));
            REQUIRE_THAT(r.ut - l.ut, WithinAbs(f * jump_t, 1e-14 * vmax));
            const double ke = 0.5 * l.rho * (l.un * l.un + l.ut * l.ut);
            REQUIRE_THAT(l.rhoE, WithinRel(l.ie1 + l.ie2 + ke, 1e-14));
        }
    }
    SECTION("supersonic face: correction on and off are bitwise identical") {
        const FaceSide l = gas_side(1.0, 500.0, 1e5);  // M ~ 1.3
        const FaceSide r = gas_side(0.5, -480.0, 5e4); // head-on, still supersonic
        REQUIRE(low_mach_factor(l, r) == 1.0);
        const auto a = hllc_interface_solution(l, r, air, air, true);
        const auto b = hllc_interface_solution(l, r, air, air, false);
        for (int n = 0; n < 5; ++n) CHECK(a.flux[n] == b.flux[n]);
        CHECK(a.un == b.un);
        CHECK(a.alpha1_un == b.alpha1_un);
        CHECK(a.ie1_un == b.ie1_un);
        CHECK(a.ie2_un == b.ie2_un);
        CHECK(a.SL == b.SL);
        CHECK(a.Sstar == b.Sstar);
        CHECK(a.SR == b.SR);
        CHECK(a.f == 1.0);
        CHECK(b.f == 1.0);
    }
}

TEST_CASE("star state") {
    SECTION("contact moving with the flow reproduces the side state") {
        const FaceSide k = make_face_side({0.3, 1.2, 800.0, 40.0, -7.0, 3e5, 3e5},
                                          1.0, 0.0, air, water);
        const auto qs = hllc_star_state(k, k.un - k.a, k.un);
        CHECK(qs[0] == k.m1());
        CHECK(qs[1] == k.m2());
        CHECK(qs[2] == k.rho * k.un);
        CHECK(qs[3] == k.rho * k.ut);
        CHECK(qs[4] == k.rhoE);
    }
    SECTION("collapsed wave fan is rejected") {
        const FaceSide k = gas_side(1.0, 0.0, 1e5);
        CHECK_THROWS_AS(hllc_star_state(k, -300.0, -300.0), SolverError);
    }
    SECTION("star partial densities stay positive") {
        std::mt19937 rng(1234);
        for (int i = 0; i < 5000; ++i) {
            const FaceSide l = make_face_side(random_state(rng), 1.0, 0.0, air, water);
            const FaceSide r = make_face_side(random_state(rng), 1.0, 0.0, air, water);
            double SL, SR;
            davis_wave_speeds(l, r, SL, SR);
            const double ss = contact_wave_speed(l, r, SL, SR);
            const auto ql = hllc_star_state(l, SL, ss);
            const auto qr = hllc_star_state(r, SR, ss);
            REQUIRE(ql[0] > 0.0);
            REQUIRE(ql[1] > 0.0);
            REQUIRE(qr[0] > 0.0);
            REQUIRE(qr[1] > 0.0);
        }
    }
}

TEST_CASE("phasic star quantities") {
    SECTION("identity jump") {
        const FaceSide k = make_face_side({0.5, 1.0, 1000.0, 20.0, 0.0, 1e5, 1e5},
                                          1.0, 0.0, air, water);
        const auto ps = phasic_star_quantities(k, k.un - k.a, k.un, air, water);
        CHECK(ps.rho_star1 == 1.0);
        CHECK(ps.rho_star2 == 1000.0);
        CHECK_THAT(ps.p_star1, WithinRel(1e5, 1e-13));
        // the stiff phase only resolves p to ulps of (p + pi)
        CHECK_THAT(ps.p_star2, WithinAbs(1e5, 1e-6));
        CHECK_THAT(ps.e_star1, WithinRel(phase_internal_energy(1e5, 1.0, air), 1e-13));
    }
    SECTION("double compression of air raises the pressure 2.75-fold") {
        CHECK_THAT(hugoniot_star_pressure(1e5, 1.0, 2.0, air), WithinRel(2.75e5, 1e-14));
    }
    SECTION("weak jumps follow the acoustic relation") {
        const double d = 1e-6;
        for (const auto& [p, rho, eos] :
             {std::tuple{1e5, 1.0, air}, std::tuple{1e5, 1000.0, water}}) {
            const double ps = hugoniot_star_pressure(p, rho, rho * (1.0 + d), eos);
            const double z = phase_bulk_modulus(p, rho, eos);
            const double second_order = 2.0 * eos.gamma * eos.gamma * (p + eos.pi) * d * d;
            REQUIRE_THAT(ps - p, WithinAbs(z * d, second_order));
        }
    }
    SECTION("expansion lowers the pressure") {
        const double ps = hugoniot_star_pressure(1e5, 1.0, 0.5, air);
        CHECK(ps > 0.0);
        CHECK(ps < 1e5);
    }
    SECTION("compression at the Hugoniot pole is rejected") {
        // ideal-gas pole at rho*/rho = (gamma+1)/(gamma-1) = 6; probing
        // exactly at 6.0 is ambiguous at ulp level, so stay clear of it
        CHECK_THROWS_AS(hugoniot_star_pressure(1e5, 1.0, 6.000001, air), SolverError);
        CHECK_THROWS_AS(hugoniot_star_pressure(1e5, 1.0, 6.5, air), SolverError);
        CHECK_THROWS_AS(hugoniot_star_pressure(1e5, 1000.0, 1600.0, water), SolverError);
        CHECK_NOTHROW(hugoniot_star_pressure(1e5, 1.0, 5.9, air));
    }
}

TEST_CASE("wave ordering over random face pairs") {
    std::mt19937 rng(31337);
    int solved = 0;
    for (int i = 0; i < 100000; ++i) {
        const FaceSide l = make_face_side(random_state(rng), 1.0, 0.0, air, water);
        const FaceSide r = make_face_side(random_state(rng), 1.0, 0.0, air, water);
        // the wave fan itself is defined for every admissible pair
        double SL, SR;
        davis_wave_speeds(l, r, SL, SR);
        const double ss = contact_wave_speed(l, r, SL, SR);
        const double slack = 1e-12 * (std::abs(SL) + std::abs(SR));
        REQUIRE(SL <= ss + slack);
        REQUIRE(ss <= SR + slack);

        InterfaceSolution sol;
        if (!try_solve(l, r, false, sol)) continue;
        ++solved;
        REQUIRE(sol.SL <= sol.Sstar + slack);
        REQUIRE(sol.Sstar <= sol.SR + slack);
    }
    // most random pairs stay below the stiff-phase compression limit
    CHECK(solved > 50000);
}

TEST_CASE("mirror antisymmetry of the face solution") {
    std::mt19937 rng(5150);
    for (int i = 0; i < 2000; ++i) {
        PrimitiveState wl = random_state(rng);
        PrimitiveState wr = random_state(rng);
        const FaceSide l = make_face_side(wl, 1.0, 0.0, air, water);
        const FaceSide r = make_face_side(wr, 1.0, 0.0, air, water);
        // reflect through the face: swap sides, flip normal velocities
        PrimitiveState wlm = wr, wrm = wl;
        wlm.u = -wlm.u;
        wrm.u = -wrm.u;
        const FaceSide lm = make_face_side(wlm, 1.0, 0.0, air, water);
        const FaceSide rm = make_face_side(wrm, 1.0, 0.0, air, water);
        for (bool corr : {false, true}) {
            InterfaceSolution sol, mir;
            if (!try_solve(l, r, corr, sol) || !try_solve(lm, rm, corr, mir)) continue;
            const double speed = std::max(std::abs(sol.SL), std::abs(sol.SR));
            const double rho = std::max(l.rho, r.rho);
            const double mass = rho * speed;
            REQUIRE_THAT(mir.flux[0], WithinAbs(-sol.flux[0], 1e-11 * mass));
            REQUIRE_THAT(mir.flux[1], WithinAbs(-sol.flux[1], 1e-11 * mass));
            REQUIRE_THAT(mir.flux[2], WithinAbs(sol.flux[2], 1e-11 * mass * speed));
            REQUIRE_THAT(mir.flux[3], WithinAbs(-sol.flux[3], 1e-11 * mass * speed));
            REQUIRE_THAT(mir.flux[4], WithinAbs(-sol.flux[4], 1e-11 * mass * speed * speed));
            REQUIRE_THAT(mir.un, WithinAbs(-sol.un, 1e-11 * speed));
            REQUIRE_THAT(mir.SL, WithinAbs(-sol.SR, 1e-11 * speed));
            REQUIRE_THAT(mir.SR, WithinAbs(-sol.SL, 1e-11 * speed));
        }
    }
}

TEST_CASE("straddling expansion fans are counted") {
    RunStats stats;
    // shock-tube expansion shifted into the frame where the fan contains the face
    const FaceSide l = gas_side(1.0, 300.0, 1e5);
    const FaceSide r = gas_side(0.125, 300.0, 1e4);
    const auto sol = hllc_interface_solution(l, r, air, air, false, &stats);
    REQUIRE(sol.SL < 0.0);
    REQUIRE(sol.Sstar > 0.0);
    CHECK(stats.sonic_rarefactions.load() == 1);
    // the same jump fully to one side of the face leaves the counter alone
    const FaceSide l2 = gas_side(1.0, 0.0, 1e5);
    const FaceSide r2 = gas_side(0.125, 0.0, 1e4);
    hllc_interface_solution(l2, r2, air, air, false, &stats);
    CHECK(stats.sonic_rarefactions.load() == 1);
}
