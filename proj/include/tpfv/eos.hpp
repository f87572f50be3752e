#pragma once

#include <cmath>
#include <string>

#include "tpfv/errors.hpp"

namespace tpfv {

/*--- Stiffened-gas equation of state, one instance per phase.
      p = rho*e*(gamma - 1) - gamma*pi, so pi = 0 recovers the ideal gas.
      Liquids are represented with a large pi (water: gamma 4.4, pi 6e8 Pa). ---*/

struct PhaseEos {
    double gamma; // ratio of specific heats, > 1
    double pi;    // stiffness pressure [Pa], >= 0
};

// Specific internal energy from pressure and density.
inline double phase_internal_energy(double p, double rho, const PhaseEos& eos) {
    if (!(rho > 0.0))
        throw SolverError(ErrorCode::domain_error,
                          "phase_internal_energy: rho = " + std::to_string(rho));
    return (p + eos.gamma * eos.pi) / (rho * (eos.gamma - 1.0));
}

// Pressure from specific internal energy and density.
inline double phase_pressure(double e, double rho, const PhaseEos& eos) {
    if (!(rho > 0.0))
        throw SolverError(ErrorCode::domain_error,
                          "phase_pressure: rho = " + std::to_string(rho));
    return rho * e * (eos.gamma - 1.0) - eos.gamma * eos.pi;
}

// Phasic speed of sound; requires p + pi > 0 (hyperbolicity).
inline double phase_sound_speed(double p, double rho, const PhaseEos& eos) {
    if (!(rho > 0.0))
        throw SolverError(ErrorCode::domain_error,
                          "phase_sound_speed: rho = " + std::to_string(rho));
    const double stiff = p + eos.pi;
    if (!(stiff > 0.0))
        throw SolverError(ErrorCode::non_hyperbolic,
                          "phase_sound_speed: p + pi = " + std::to_string(stiff));
    return std::sqrt(eos.gamma * stiff / rho);
}

// Acoustic impedance rho*a^2 = gamma*(p + pi); used for interface-pressure weights.
inline double phase_bulk_modulus(double p, double rho, const PhaseEos& eos) {
    const double a = phase_sound_speed(p, rho, eos);
    return rho * a * a;
}

/*--- Mixture closures. The model carries one volume fraction (alpha1,
      alpha2 = 1 - alpha1), per-phase densities and pressures, a single
      velocity. Mixture quantities are the alpha-weighted sums. ---*/

inline void check_alpha_pair(double alpha1, double alpha2, const char* where) {
    if (std::abs(alpha1 + alpha2 - 1.0) > 1e-12)
        throw SolverError(ErrorCode::invariant_violation,
                          std::string(where) + ": alpha1 + alpha2 - 1 = " +
                              std::to_string(alpha1 + alpha2 - 1.0));
}

inline double mixture_density(double alpha1, double rho1, double alpha2, double rho2) {
    check_alpha_pair(alpha1, alpha2, "mixture_density");
    return alpha1 * rho1 + alpha2 * rho2;
}

inline double mixture_pressure(double alpha1, double p1, double alpha2, double p2) {
    check_alpha_pair(alpha1, alpha2, "mixture_pressure");
    return alpha1 * p1 + alpha2 * p2;
}

// Mixture speed of sound: rho*a^2 = sum_j alpha_j * rho_j * a_j^2.
inline double mixture_sound_speed(double alpha1, double rho1, double p1,
                                  double alpha2, double rho2, double p2,
                                  const PhaseEos& eos1, const PhaseEos& eos2) {
    check_alpha_pair(alpha1, alpha2, "mixture_sound_speed");
    const double rho = alpha1 * rho1 + alpha2 * rho2;
    if (!(rho > 0.0))
        throw SolverError(ErrorCode::domain_error, "mixture_sound_speed: rho <= 0");
    const double z1 = phase_bulk_modulus(p1, rho1, eos1);
    const double z2 = phase_bulk_modulus(p2, rho2, eos2);
    return std::sqrt((alpha1 * z1 + alpha2 * z2) / rho);
}

/*--- Interface pressure, impedance-weighted across the pair:

          p_I = (z1*p2 + z2*p1) / (z1 + z2),   z_j = rho_j*a_j^2.

      The weighting leans on the stiffer phase's pressure being felt by the
      softer one: for air against water, p_I tracks the air-side pressure. ---*/

inline double interface_pressure(double p1, double p2, double z1, double z2) {
    if (!(z1 > 0.0) || !(z2 > 0.0))
        throw SolverError(ErrorCode::domain_error, "interface_pressure: impedance <= 0");
    return (z1 * p2 + z2 * p1) / (z1 + z2);
}

inline double interface_pressure(double alpha1, double rho1, double p1,
                                 double alpha2, double rho2, double p2,
                                 const PhaseEos& eos1, const PhaseEos& eos2) {
    check_alpha_pair(alpha1, alpha2, "interface_pressure");
    return interface_pressure(p1, p2,
                              phase_bulk_modulus(p1, rho1, eos1),
                              phase_bulk_modulus(p2, rho2, eos2));
}

} // namespace tpfv
