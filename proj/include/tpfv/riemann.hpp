#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "tpfv/eos.hpp"
#include "tpfv/errors.hpp"
#include "tpfv/state.hpp"

namespace tpfv {

/*--- One side of a face Riemann problem, in the face frame. The
      thermodynamic part (alpha, rho_j, p_j) is set once; velocities may be
      replaced by the low-Mach reconstruction, which also refreshes the
      kinetic contribution to rhoE. ---*/

struct FaceSide {
    double alpha1;
    double rho1, rho2;
    double un, ut;   // face-normal and tangential velocity
    double p1, p2;
    double rho, p;   // mixture density and pressure
    double a;        // mixture speed of sound
    double ie1, ie2; // alpha_j rho_j e_j
    double rhoE;     // mixture total energy per volume

    double m1() const { return alpha1 * rho1; }
    double m2() const { return (1.0 - alpha1) * rho2; }
};

inline FaceSide make_face_side(const PrimitiveState& w, double face_nx, double face_ny,
                               const PhaseEos& eos1, const PhaseEos& eos2) {
    FaceSide s;
    s.alpha1 = w.alpha1;
    s.rho1 = w.rho1;
    s.rho2 = w.rho2;
    s.p1 = w.p1;
    s.p2 = w.p2;
    rotate_to_face(w.u, w.v, face_nx, face_ny, s.un, s.ut);
    const double alpha2 = 1.0 - w.alpha1;
    s.rho = w.alpha1 * w.rho1 + alpha2 * w.rho2;
    s.p = w.alpha1 * w.p1 + alpha2 * w.p2;
    s.ie1 = w.alpha1 * w.rho1 * phase_internal_energy(w.p1, w.rho1, eos1);
    s.ie2 = alpha2 * w.rho2 * phase_internal_energy(w.p2, w.rho2, eos2);
    const double z1 = phase_bulk_modulus(w.p1, w.rho1, eos1);
    const double z2 = phase_bulk_modulus(w.p2, w.rho2, eos2);
    s.a = std::sqrt((w.alpha1 * z1 + alpha2 * z2) / s.rho);
    s.rhoE = s.ie1 + s.ie2 + 0.5 * s.rho * (s.un * s.un + s.ut * s.ut);
    return s;
}

/*--- Low-Mach velocity-jump scaling. The face Mach number uses the full
      velocity magnitude against each side's mixture sound speed; f = 1 leaves
      the jump untouched, f -> 0 removes it while preserving the average. ---*/

inline double low_mach_factor(const FaceSide& l, const FaceSide& r) {
    const double ml = std::sqrt(l.un * l.un + l.ut * l.ut) / l.a;
    const double mr = std::sqrt(r.un * r.un + r.ut * r.ut) / r.a;
    return std::min(1.0, std::max(ml, mr));
}

// Replace both velocity components by average -+ f*jump/2 and refresh the
// kinetic part of rhoE. Thermodynamic quantities are untouched.
inline void low_mach_reconstruct(FaceSide& l, FaceSide& r, double f) {
    const double avg_n = 0.5 * (l.un + r.un), half_jump_n = 0.5 * f * (r.un - l.un);
    const double avg_t = 0.5 * (l.ut + r.ut), half_jump_t = 0.5 * f * (r.ut - l.ut);
    l.un = avg_n - half_jump_n;
    r.un = avg_n + half_jump_n;
    l.ut = avg_t - half_jump_t;
    r.ut = avg_t + half_jump_t;
    l.rhoE = l.ie1 + l.ie2 + 0.5 * l.rho * (l.un * l.un + l.ut * l.ut);
    r.rhoE = r.ie1 + r.ie2 + 0.5 * r.rho * (r.un * r.un + r.ut * r.ut);
}

// Davis estimates from the fastest characteristics of either side.
inline void davis_wave_speeds(const FaceSide& l, const FaceSide& r,
                              double& SL, double& SR) {
    SL = std::min(l.un - l.a, r.un - r.a);
    SR = std::max(l.un + l.a, r.un + r.a);
}

// Contact speed from the mixture momentum balance between the acoustic waves.
inline double contact_wave_speed(const FaceSide& l, const FaceSide& r,
                                 double SL, double SR, RunStats* stats = nullptr) {
    const double ml = l.rho * (SL - l.un); // <= -rho_l a_l for Davis speeds
    const double mr = r.rho * (SR - r.un); // >= rho_r a_r
    const double den = mr - ml;
    if (!(std::abs(den) > 1e-14 * (l.rho * l.a + r.rho * r.a))) {
        if (stats) stats->sstar_fallbacks.fetch_add(1, std::memory_order_relaxed);
        return 0.5 * (l.un + r.un);
    }
    // grouped so that exchanging the sides and negating both velocities
    // negates the result bitwise
    return ((l.p - r.p) + (r.un * mr - l.un * ml)) / den;
}

/*--- Star-region states behind the acoustic wave S_K of side K. ---*/

// Conservative face vector [m1, m2, rho*un, rho*ut, rhoE] in the star region.
inline std::array<double, 5> hllc_star_state(const FaceSide& k, double SK, double Sstar) {
    const double dK = SK - k.un;
    const double dS = SK - Sstar;
    if (!(std::abs(dS) > 0.0))
        throw SolverError(ErrorCode::degenerate_wave, "hllc_star_state: S_K == S*");
    const double factor = dK / dS;
    const double energy =
        k.rhoE + (Sstar - k.un) * (k.rho * Sstar + k.p / dK);
    return {factor * k.m1(), factor * k.m2(), factor * k.rho * Sstar,
            factor * k.rho * k.ut, factor * energy};
}

/*--- Phasic star quantities on side K. Each phase is compressed or expanded
      by the same kinematic factor as the mixture; its pressure then follows
      the stiffened-gas Hugoniot of that phase evaluated at the pre-wave
      state, and the star energy closes the set through the EOS. ---*/

struct PhasicStar {
    double rho_star1, rho_star2;
    double p_star1, p_star2;
    double e_star1, e_star2;
};

inline double hugoniot_star_pressure(double p, double rho, double rho_star,
                                     const PhaseEos& eos) {
    const double gm = eos.gamma - 1.0, gp = eos.gamma + 1.0;
    const double den = gm * rho_star - gp * rho;
    if (!(den < 0.0))
        throw SolverError(ErrorCode::hugoniot_limit,
                          "hugoniot_star_pressure: compression ratio at the Hugoniot pole");
    return (p + eos.pi) * (gm * rho - gp * rho_star) / den - eos.pi;
}

inline PhasicStar phasic_star_quantities(const FaceSide& k, double SK, double Sstar,
                                         const PhaseEos& eos1, const PhaseEos& eos2) {
    const double factor = (SK - k.un) / (SK - Sstar);
    if (!(factor > 0.0))
        throw SolverError(ErrorCode::degenerate_wave,
                          "phasic_star_quantities: nonpositive compression factor");
    PhasicStar ps;
    ps.rho_star1 = k.rho1 * factor;
    ps.rho_star2 = k.rho2 * factor;
    ps.p_star1 = hugoniot_star_pressure(k.p1, k.rho1, ps.rho_star1, eos1);
    ps.p_star2 = hugoniot_star_pressure(k.p2, k.rho2, ps.rho_star2, eos2);
    ps.e_star1 = phase_internal_energy(ps.p_star1, ps.rho_star1, eos1);
    ps.e_star2 = phase_internal_energy(ps.p_star2, ps.rho_star2, eos2);
    return ps;
}

/*--- Full single-face solution: the conservative flux and the interface
      quantities that feed the non-conservative volume-fraction and phasic
      energy updates. Everything is evaluated from the wave branch that
      contains the face (x/t = 0). ---*/

struct InterfaceSolution {
    std::array<double, 5> flux; // face frame: [m1, m2, mom_n, mom_t, E]
    double un;                  // interface normal velocity
    double alpha1_un;           // interface alpha1 * un
    double ie1_un, ie2_un;      // interface alpha_j rho_j e_j * un
    double SL, Sstar, SR;
    double f;                   // velocity-jump scaling applied (1 = none)
};

namespace detail {

inline std::array<double, 5> raw_flux(const FaceSide& k) {
    return {k.m1() * k.un, k.m2() * k.un, k.rho * k.un * k.un + k.p,
            k.rho * k.un * k.ut, (k.rhoE + k.p) * k.un};
}

// Mixture sound speed assembled from the phasic star states, used only to
// spot rarefaction fans that straddle the face.
inline double star_sound_speed(const FaceSide& k, const PhasicStar& ps,
                               const PhaseEos& eos1, const PhaseEos& eos2) {
    const double alpha2 = 1.0 - k.alpha1;
    const double z = k.alpha1 * eos1.gamma * (ps.p_star1 + eos1.pi) +
                     alpha2 * eos2.gamma * (ps.p_star2 + eos2.pi);
    const double rho_star = k.alpha1 * ps.rho_star1 + alpha2 * ps.rho_star2;
    if (!(z > 0.0) || !(rho_star > 0.0)) return 0.0;
    return std::sqrt(z / rho_star);
}

} // namespace detail

inline InterfaceSolution hllc_interface_solution(FaceSide l, FaceSide r,
                                                 const PhaseEos& eos1, const PhaseEos& eos2,
                                                 bool correction, RunStats* stats = nullptr) {
    InterfaceSolution out;
    out.f = 1.0;
    if (correction) {
        const double f = low_mach_factor(l, r);
        if (f < 1.0) {
            low_mach_reconstruct(l, r, f);
            out.f = f;
        }
    }

    davis_wave_speeds(l, r, out.SL, out.SR);
    out.Sstar = contact_wave_speed(l, r, out.SL, out.SR, stats);

    if (0.0 <= out.SL) {
        out.flux = detail::raw_flux(l);
        out.un = l.un;
        out.alpha1_un = l.alpha1 * l.un;
        out.ie1_un = l.ie1 * l.un;
        out.ie2_un = l.ie2 * l.un;
        return out;
    }
    if (0.0 >= out.SR) {
        out.flux = detail::raw_flux(r);
        out.un = r.un;
        out.alpha1_un = r.alpha1 * r.un;
        out.ie1_un = r.ie1 * r.un;
        out.ie2_un = r.ie2 * r.un;
        return out;
    }

    if (out.Sstar == 0.0) {
        // The face sits exactly on the contact: nothing advects. The
        // difference form below would only recover these zeros up to a
        // cancellation residue of order eps*|S_K|*rhoE, and from one side
        // only, so evaluate the star pressure two-sided instead; the two
        // one-sided values agree analytically, and the average is exact
        // under left/right exchange.
        const double ml = l.rho * (out.SL - l.un), mr = r.rho * (out.SR - r.un);
        const double pl_star = l.p + ml * (out.Sstar - l.un);
        const double pr_star = r.p + mr * (out.Sstar - r.un);
        out.flux = {0.0, 0.0, 0.5 * (pl_star + pr_star), 0.0, 0.0};
        out.un = 0.0;
        out.alpha1_un = 0.0;
        out.ie1_un = 0.0;
        out.ie2_un = 0.0;
        return out;
    }

    const bool left_star = (0.0 < out.Sstar);
    const FaceSide& k = left_star ? l : r;
    const double SK = left_star ? out.SL : out.SR;

    const auto qk = std::array<double, 5>{k.m1(), k.m2(), k.rho * k.un, k.rho * k.ut, k.rhoE};
    const auto qs = hllc_star_state(k, SK, out.Sstar);
    const auto fk = detail::raw_flux(k);
    for (int n = 0; n < 5; ++n) out.flux[n] = fk[n] + SK * (qs[n] - qk[n]);

    const auto ps = phasic_star_quantities(k, SK, out.Sstar, eos1, eos2);
    out.un = out.Sstar;
    out.alpha1_un = k.alpha1 * out.Sstar;
    out.ie1_un = k.alpha1 * ps.rho_star1 * ps.e_star1 * out.Sstar;
    out.ie2_un = (1.0 - k.alpha1) * ps.rho_star2 * ps.e_star2 * out.Sstar;

    if (stats) {
        // Expansion fan straddling the face: head outside, tail inside. The
        // side is expanding exactly when the contact recedes from it, and the
        // tail-side test compares squared speeds to avoid the square root.
        const bool expanding = left_star ? (k.un < out.Sstar) : (k.un > out.Sstar);
        const bool head_out = left_star ? (k.un - k.a < 0.0) : (k.un + k.a > 0.0);
        if (expanding && head_out) {
            const double alpha2 = 1.0 - k.alpha1;
            const double z = k.alpha1 * eos1.gamma * (ps.p_star1 + eos1.pi) +
                             alpha2 * eos2.gamma * (ps.p_star2 + eos2.pi);
            const double rho_star = k.alpha1 * ps.rho_star1 + alpha2 * ps.rho_star2;
            if (z > 0.0 && rho_star > 0.0 &&
                out.Sstar * out.Sstar * rho_star > z)
                stats->sonic_rarefactions.fetch_add(1, std::memory_order_relaxed);
        }
    }
    return out;
}

} // namespace tpfv
