#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "tpfv/evolution.hpp"
#include "tpfv/mesh.hpp"
#include "tpfv/riemann.hpp"

namespace tpfv {

/*--- Structural self-checks. Each one probes an exact property the scheme
      is built on (flux consistency, conservation, symmetry, determinism,
      ...) on a small mesh in a few seconds; together they make up the
      `check` verb of the command line tool. A check never throws on a
      property violation: it reports pass/fail plus the measured number so
      a regression is visible at a glance. ---*/

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::string fmt_measure(const char* label, double value, double bound) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s %.3e (bound %.3e)", label, value, bound);
    return std::string(buf);
}

inline std::array<double, 8> conserved_array(const ConservedState& q) {
    return {q.alpha1, q.m1, q.m2, q.mx, q.my, q.E, q.ie1, q.ie2};
}

inline PrimitiveState random_check_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> ua(1e-6, 1.0 - 1e-6);
    std::uniform_real_distribution<double> ur1(0.05, 20.0), ur2(200.0, 1800.0);
    std::uniform_real_distribution<double> uu(-800.0, 800.0);
    std::uniform_real_distribution<double> up(2e4, 8e6);
    return {ua(rng), ur1(rng), ur2(rng), uu(rng), uu(rng), up(rng), up(rng)};
}

} // namespace detail

/*--- The interface flux of two equal sides must reduce to the analytic
      flux of that state, with and without the velocity correction. ---*/

inline CheckResult check_flux_consistency() {
    const PhaseEos gas{1.4, 0.0}, liquid{4.4, 6e8};
    std::mt19937 rng(9001);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const PrimitiveState w = detail::random_check_state(rng);
        const FaceSide s = make_face_side(w, 0.8, -0.6, gas, liquid);
        const std::array<double, 5> ref = {s.m1() * s.un, s.m2() * s.un,
                                           s.rho * s.un * s.un + s.p, s.rho * s.un * s.ut,
                                           (s.rhoE + s.p) * s.un};
        const double speed = std::abs(s.un) + s.a;
        const std::array<double, 5> scale = {s.m1(), s.m2(), s.rho * speed, s.rho * speed, s.rhoE};
        for (bool corr : {false, true}) {
            const auto sol = hllc_interface_solution(s, s, gas, liquid, corr);
            for (int n = 0; n < 5; ++n) {
                const double denom = std::abs(ref[n]) + speed * scale[n];
                worst = std::max(worst, std::abs(sol.flux[n] - ref[n]) / denom);
            }
            worst = std::max(worst, std::abs(sol.un - s.un) / speed);
        }
    }
    const double bound = 1e-12;
    return {"flux_consistency", worst <= bound,
            detail::fmt_measure("max scaled deviation", worst, bound)};
}

/*--- At sonic-or-faster faces the correction factor saturates at one and
      the corrected solver must reproduce the uncorrected flux bit for bit;
      at a genuinely low-Mach face the factor must engage. ---*/

inline CheckResult check_correction_degeneracy() {
    const PhaseEos gas{1.4, 0.0};
    auto side = [&](double rho, double u, double p) {
        const PrimitiveState w{0.5, rho, rho, u, 0.0, p, p};
        return make_face_side(w, 1.0, 0.0, gas, gas);
    };

    const std::pair<FaceSide, FaceSide> fast[] = {
        {side(1.0, 500.0, 1e5), side(0.5, -480.0, 5e4)},
        {side(1.3, 620.0, 2e5), side(1.3, 620.0, 2e5)},
        {side(0.4, -900.0, 8e4), side(0.9, -850.0, 1.2e5)},
    };
    for (const auto& [l, r] : fast) {
        if (low_mach_factor(l, r) != 1.0)
            return {"correction_degeneracy", false, "supersonic face has factor below one"};
        const auto a = hllc_interface_solution(l, r, gas, gas, true);
        const auto b = hllc_interface_solution(l, r, gas, gas, false);
        bool same = a.un == b.un && a.alpha1_un == b.alpha1_un && a.ie1_un == b.ie1_un &&
                    a.ie2_un == b.ie2_un && a.f == 1.0;
        for (int n = 0; n < 5; ++n) same = same && a.flux[n] == b.flux[n];
        if (!same)
            return {"correction_degeneracy", false,
                    "corrected and uncorrected fluxes differ at a supersonic face"};
    }

    // low-Mach face: the factor must engage and actually change the flux
    const FaceSide l = side(1.2, 1.0, 1e5), r = side(1.2, -1.0, 1.001e5);
    const double f = low_mach_factor(l, r);
    if (!(f < 0.05))
        return {"correction_degeneracy", false, "low-Mach face factor did not engage"};
    const auto a = hllc_interface_solution(l, r, gas, gas, true);
    const auto b = hllc_interface_solution(l, r, gas, gas, false);
    if (a.flux[2] == b.flux[2])
        return {"correction_degeneracy", false, "correction has no effect at a low-Mach face"};
    char buf[96];
    std::snprintf(buf, sizeof(buf), "saturated faces bitwise equal, low-Mach factor %.3e", f);
    return {"correction_degeneracy", true, buf};
}

/*--- A resting uniform state must stay put: bitwise uniform on a box, and
      drift-free on the curved channel where face normals do not cancel by
      construction. ---*/

inline CheckResult check_free_stream() {
    const PhaseEos gas{1.4, 0.0}, liquid{4.4, 6e8};
    const PrimitiveState w{0.3, 1.1, 997.0, 0.0, 0.0, 1.3e5, 1.3e5};

    {
        const auto mesh = build_box_mesh(6, 5, 0.12, 0.1);
        SchemeConfig cfg;
        cfg.order = 2;
        FlowSolver solver(mesh, gas, liquid, cfg);
        solver.set_initial(std::vector<PrimitiveState>(mesh.cell_count(), w));
        for (int s = 0; s < 20; ++s) solver.advance(solver.stable_time_step());
        const auto q0 = detail::conserved_array(solver.field()[0]);
        for (int c = 1; c < mesh.cell_count(); ++c)
            if (detail::conserved_array(solver.field()[c]) != q0)
                return {"free_stream", false, "uniform box state lost cellwise uniformity"};
    }

    const auto mesh = build_nozzle_mesh(24, 8, 1.0, 0.075, 0.05);
    SchemeConfig cfg;
    cfg.order = 2;
    BoundaryValues bv;
    bv.inlet_alpha1 = w.alpha1;
    bv.inlet_rho1 = w.rho1;
    bv.inlet_rho2 = w.rho2;
    bv.inlet_u = 0.0;
    bv.inlet_v = 0.0;
    bv.outlet_p = w.p1;
    FlowSolver solver(mesh, gas, liquid, cfg, bv);
    solver.set_initial(std::vector<PrimitiveState>(mesh.cell_count(), w));
    for (int s = 0; s < 20; ++s) solver.advance(solver.stable_time_step());

    double umax = 0.0, dpmax = 0.0;
    for (const auto& d : solver.primitives()) {
        umax = std::max({umax, std::abs(d.u), std::abs(d.v)});
        dpmax = std::max(dpmax, std::abs(d.p() - w.p1));
    }
    const double a = mixture_sound_speed(w.alpha1, w.rho1, w.p1, 1.0 - w.alpha1, w.rho2, w.p2,
                                         gas, liquid);
    const double ubound = 1e-9 * a, pbound = 1e-9 * (liquid.gamma * liquid.pi + w.p1);
    if (umax > ubound)
        return {"free_stream", false, detail::fmt_measure("channel velocity drift", umax, ubound)};
    if (dpmax > pbound)
        return {"free_stream", false, detail::fmt_measure("channel pressure drift", dpmax, pbound)};
    return {"free_stream", true,
            detail::fmt_measure("channel velocity drift", umax, ubound) + ", " +
                detail::fmt_measure("pressure drift", dpmax, pbound)};
}

/*--- A closed box must conserve both masses, momentum, and total energy to
      rounding, step after step. ---*/

inline CheckResult check_closed_box_conservation() {
    const PhaseEos gas{1.4, 0.0}, liquid{4.4, 6e8};
    const auto mesh = build_box_mesh(12, 12, 0.12, 0.12);
    const int nc = mesh.cell_count();
    std::vector<PrimitiveState> w(static_cast<std::size_t>(nc));
    for (int c = 0; c < nc; ++c) {
        const double dx = mesh.cell_cx[static_cast<std::size_t>(c)] - 0.06;
        const double dy = mesh.cell_cy[static_cast<std::size_t>(c)] - 0.06;
        const double p = 1e5 * (1.0 + 0.2 * std::exp(-(dx * dx + dy * dy) / (0.025 * 0.025)));
        w[static_cast<std::size_t>(c)] = {0.35, 1.2, 998.0, 0.0, 0.0, p, p};
    }

    double mom_scale = 0.0;
    for (int c = 0; c < nc; ++c) {
        const auto& s = w[static_cast<std::size_t>(c)];
        const double rho = s.alpha1 * s.rho1 + (1.0 - s.alpha1) * s.rho2;
        const double a = mixture_sound_speed(s.alpha1, s.rho1, s.p1, 1.0 - s.alpha1, s.rho2,
                                             s.p2, gas, liquid);
        mom_scale += mesh.cell_area[static_cast<std::size_t>(c)] * rho * a;
    }

    double worst = 0.0;
    const int steps = 25;
    for (int order : {1, 2}) {
        SchemeConfig cfg;
        cfg.order = order;
        FlowSolver solver(mesh, gas, liquid, cfg);
        solver.set_initial(w);
        const auto t0 = solver.conserved_totals(solver.field());
        for (int s = 0; s < steps; ++s) solver.advance(solver.stable_time_step());
        const auto t1 = solver.conserved_totals(solver.field());
        const double scale[5] = {std::abs(t0[0]), std::abs(t0[1]), mom_scale, mom_scale,
                                 std::abs(t0[4])};
        for (int k = 0; k < 5; ++k)
            worst = std::max(worst, std::abs(t1[k] - t0[k]) / (steps * scale[k]));
    }
    const double bound = 1e-12;
    return {"closed_box_conservation", worst <= bound,
            detail::fmt_measure("max per-step drift", worst, bound)};
}

/*--- The weighted least-squares gradient must reproduce linear data to
      rounding on skewed and on minimal two-point stencils. ---*/

inline CheckResult check_linear_reconstruction() {
    const double off[4][2] = {{0.01, 0.002}, {-0.011, 0.001}, {0.003, 0.012}, {-0.001, -0.009}};
    Prim7 base{};
    Prim7 gx{}, gy{};
    const double base_v[7] = {0.4, 1.1, 950.0, 5.0, -3.0, 1.2e5, 2.1e5};
    const double gx_v[7] = {0.5, 2.0, -40.0, 7.0, 1.0, 3e4, -2e4};
    const double gy_v[7] = {-0.2, 1.0, 25.0, -4.0, 2.5, 1e4, 5e4};
    for (int v = 0; v < n_prim; ++v) {
        base[v] = base_v[v];
        gx[v] = gx_v[v];
        gy[v] = gy_v[v];
    }
    StencilPoint pts[4];
    for (int k = 0; k < 4; ++k) {
        pts[k].dx = off[k][0];
        pts[k].dy = off[k][1];
        for (int v = 0; v < n_prim; ++v)
            pts[k].w[v] = base[v] + gx[v] * pts[k].dx + gy[v] * pts[k].dy;
    }

    double worst = 0.0;
    for (int n_pts : {2, 3, 4}) {
        const CellGradient g = sdwls_gradient(base, pts, n_pts);
        for (int v = 0; v < n_prim; ++v) {
            const double sx = std::abs(gx[v]) + 1.0, sy = std::abs(gy[v]) + 1.0;
            worst = std::max({worst, std::abs(g.gx[v] - gx[v]) / sx,
                              std::abs(g.gy[v] - gy[v]) / sy});
        }
    }
    const double bound = 1e-10;
    return {"linear_reconstruction", worst <= bound,
            detail::fmt_measure("max gradient error", worst, bound)};
}

/*--- Mirror-symmetric data on a mirror-symmetric mesh must stay symmetric
      under many steps: even fields match, x-momentum flips sign. ---*/

inline CheckResult check_mirror_symmetry() {
    const PhaseEos gas{1.4, 0.0}, liquid{4.4, 6e8};
    const int nx = 8, ny = 4;
    const auto mesh = build_box_mesh(nx, ny, 1.0, 0.5);
    const double gi[8] = {0.0, 0.3, 0.8, 1.0, 1.0, 0.8, 0.3, 0.0};
    const double gj[4] = {0.2, 1.0, 1.0, 0.2};
    std::vector<PrimitiveState> w(static_cast<std::size_t>(mesh.cell_count()));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double bump = gi[i] * gj[j];
            const double p = 1e5 * (1.0 + 0.15 * bump);
            w[static_cast<std::size_t>(mesh.cell_index(i, j))] = {0.3 + 0.2 * bump, 1.2, 998.0,
                                                                  0.0,  0.0,        p,   p};
        }

    SchemeConfig cfg;
    cfg.order = 2;
    cfg.correction = true;
    FlowSolver solver(mesh, gas, liquid, cfg);
    solver.set_initial(w);
    for (int s = 0; s < 100; ++s) solver.advance(solver.stable_time_step());

    std::array<double, 8> scale{};
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto q = detail::conserved_array(solver.field()[static_cast<std::size_t>(c)]);
        for (int k = 0; k < 8; ++k) scale[k] = std::max(scale[k], std::abs(q[k]));
    }
    double worst = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const auto a = detail::conserved_array(
                solver.field()[static_cast<std::size_t>(mesh.cell_index(i, j))]);
            const auto b = detail::conserved_array(
                solver.field()[static_cast<std::size_t>(mesh.cell_index(nx - 1 - i, j))]);
            for (int k = 0; k < 8; ++k) {
                const double diff = (k == 3) ? a[k] + b[k] : a[k] - b[k];
                worst = std::max(worst, std::abs(diff) / scale[k]);
            }
        }
    const double bound = 1e-10;
    return {"mirror_symmetry", worst <= bound,
            detail::fmt_measure("max scaled asymmetry after 100 steps", worst, bound)};
}

/*--- The update must not depend on how the sweeps are chunked over
      workers: every field value bitwise equal across worker counts. ---*/

inline CheckResult check_worker_determinism() {
    const PhaseEos gas{1.4, 0.0}, liquid{4.4, 6e8};
    const auto mesh = build_box_mesh(9, 5, 0.18, 0.1);
    const int nc = mesh.cell_count();
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<PrimitiveState> w(static_cast<std::size_t>(nc));
    for (int c = 0; c < nc; ++c) {
        const double p = 1e5 * (1.0 + 0.3 * u01(rng));
        w[static_cast<std::size_t>(c)] = {0.2 + 0.6 * u01(rng),  1.0 + 0.4 * u01(rng),
                                          950.0 + 100.0 * u01(rng), 2.0 * u01(rng) - 1.0,
                                          2.0 * u01(rng) - 1.0,  p,
                                          p * (1.0 + 0.05 * u01(rng))};
    }

    auto run = [&](int threads) {
        SchemeConfig cfg;
        cfg.order = 2;
        cfg.threads = threads;
        FlowSolver solver(mesh, gas, liquid, cfg);
        solver.set_initial(w);
        for (int s = 0; s < 8; ++s) solver.advance(solver.stable_time_step());
        return solver.field();
    };

    const auto ref = run(1);
    for (int threads : {2, 3, 5}) {
        const auto got = run(threads);
        for (int c = 0; c < nc; ++c)
            if (detail::conserved_array(got[static_cast<std::size_t>(c)]) !=
                detail::conserved_array(ref[static_cast<std::size_t>(c)])) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "field differs with %d workers", threads);
                return {"worker_determinism", false, buf};
            }
    }
    return {"worker_determinism", true, "fields bitwise equal across 1, 2, 3, 5 workers"};
}

inline std::vector<CheckResult> run_structural_checks() {
    return {check_flux_consistency(),   check_correction_degeneracy(),
            check_free_stream(),        check_closed_box_conservation(),
            check_linear_reconstruction(), check_mirror_symmetry(),
            check_worker_determinism()};
}

} // namespace tpfv
