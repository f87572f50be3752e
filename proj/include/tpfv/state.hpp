#pragma once

#include <cmath>
#include <string>

#include "tpfv/eos.hpp"
#include "tpfv/errors.hpp"

namespace tpfv {

// Volume-fraction floor. No phase ever fully vanishes; pure regions carry
// the other phase at eps_alpha so both phasic energies stay meaningful.
inline constexpr double eps_alpha = 1e-8;

inline double clamp_alpha(double alpha1, RunStats* stats = nullptr) {
    if (alpha1 < eps_alpha || alpha1 > 1.0 - eps_alpha) {
        if (stats) stats->alpha_clamps.fetch_add(1, std::memory_order_relaxed);
        return alpha1 < eps_alpha ? eps_alpha : 1.0 - eps_alpha;
    }
    return alpha1;
}

/*--- Cell state in primitive form: one velocity, two phasic densities and
      pressures. alpha2 is implied (1 - alpha1) and never stored. ---*/

struct PrimitiveState {
    double alpha1;
    double rho1, rho2;
    double u, v;
    double p1, p2;

    double alpha2() const { return 1.0 - alpha1; }
    double rho() const { return alpha1 * rho1 + alpha2() * rho2; }
    double p() const { return alpha1 * p1 + alpha2() * p2; }
};

/*--- Conserved (per unit volume) variables advanced by the scheme:

        [alpha1, alpha1*rho1, alpha2*rho2, rho*u, rho*v, rho*E,
         alpha1*rho1*e1, alpha2*rho2*e2]

      The mixture total energy E is redundant with the phasic internal
      energies; it is the authority that the reinitialization step restores
      after relaxation. alpha1 itself is transported, not conserved. ---*/

struct ConservedState {
    double alpha1;
    double m1, m2;   // phasic partial densities alpha_j * rho_j
    double mx, my;   // mixture momentum
    double E;        // mixture total energy (rho*E)
    double ie1, ie2; // phasic internal energies alpha_j * rho_j * e_j

    double rho() const { return m1 + m2; }
};

inline ConservedState primitive_to_conserved(const PrimitiveState& w,
                                             const PhaseEos& eos1, const PhaseEos& eos2) {
    if (!(w.rho1 > 0.0) || !(w.rho2 > 0.0))
        throw SolverError(ErrorCode::domain_error, "primitive_to_conserved: rho_j <= 0");
    if (!(w.alpha1 >= eps_alpha) || !(w.alpha1 <= 1.0 - eps_alpha))
        throw SolverError(ErrorCode::domain_error,
                          "primitive_to_conserved: alpha1 = " + std::to_string(w.alpha1));
    ConservedState q;
    q.alpha1 = w.alpha1;
    q.m1 = w.alpha1 * w.rho1;
    q.m2 = w.alpha2() * w.rho2;
    q.ie1 = q.m1 * phase_internal_energy(w.p1, w.rho1, eos1);
    q.ie2 = q.m2 * phase_internal_energy(w.p2, w.rho2, eos2);
    const double rho = q.m1 + q.m2;
    q.mx = rho * w.u;
    q.my = rho * w.v;
    q.E = q.ie1 + q.ie2 + 0.5 * rho * (w.u * w.u + w.v * w.v);
    return q;
}

// Decode a conserved state. The phasic pressures come from the phasic
// internal energies; they stay distinct until relaxation equalizes them.
inline PrimitiveState conserved_to_primitive(const ConservedState& q,
                                             const PhaseEos& eos1, const PhaseEos& eos2,
                                             RunStats* stats = nullptr) {
    if (!(q.m1 > 0.0) || !(q.m2 > 0.0))
        throw SolverError(ErrorCode::positivity,
                          "conserved_to_primitive: partial density m1 = " +
                              std::to_string(q.m1) + ", m2 = " + std::to_string(q.m2));
    PrimitiveState w;
    w.alpha1 = clamp_alpha(q.alpha1, stats);
    const double alpha2 = 1.0 - w.alpha1;
    w.rho1 = q.m1 / w.alpha1;
    w.rho2 = q.m2 / alpha2;
    const double rho = q.m1 + q.m2;
    w.u = q.mx / rho;
    w.v = q.my / rho;
    w.p1 = phase_pressure(q.ie1 / q.m1, w.rho1, eos1);
    w.p2 = phase_pressure(q.ie2 / q.m2, w.rho2, eos2);
    return w;
}

/*--- Face-frame rotation. (un, ut) are the velocity components normal and
      tangential to a face with unit normal n; the inverse maps a face-frame
      vector back to (x, y). Both are exact rotations, |n| = 1. ---*/

inline void rotate_to_face(double u, double v, double nx, double ny,
                           double& un, double& ut) {
    un = u * nx + v * ny;
    ut = -u * ny + v * nx;
}

inline void rotate_from_face(double un, double ut, double nx, double ny,
                             double& u, double& v) {
    u = un * nx - ut * ny;
    v = un * ny + ut * nx;
}

} // namespace tpfv
