#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "tpfv/eos.hpp"
#include "tpfv/errors.hpp"
#include "tpfv/state.hpp"

namespace tpfv {

/*--- Instantaneous pressure relaxation.

      After the hyperbolic update the two phasic pressures differ. The
      relaxation exchanges volume between the phases at fixed partial
      densities, momentum and total energy until p1 = p2 = p*. Each phasic
      energy changes by the interface-pressure work -p_bar*(alpha_j* -
      alpha_j), with

          p_bar = (1 - omega)*p_I + omega*p*,

      p_I evaluated at the pre-relaxation state. Eliminating the energies
      through the stiffened-gas EOS and requiring the volume fractions to sum
      to one leaves a scalar equation in p*:

          g(p*) = sum_j (ie_j + p_bar*alpha_j) /
                        ((p* + gamma_j*pi_j)/(gamma_j - 1) + p_bar)  -  1.

      g decreases from +inf (as a denominator approaches zero from above) to
      a negative limit at large p*, so a bracketed root always exists for
      admissible inputs; Newton iterations are safeguarded by bisection.

      A final reinitialization discards the relaxed internal energies in
      favour of the conserved mixture total energy: the mixture pressure that
      reproduces rho*e at the new volume fractions is recomputed and both
      phases are reset to it. This keeps total energy authoritative and the
      pair (p1, p2) exactly equal. ---*/

struct RelaxationResult {
    ConservedState state;
    double p_star;   // equilibrium pressure from the relaxation solve
    double p_reinit; // mixture pressure after total-energy reinitialization
    int iterations;
    double residual; // |eq1| + |eq2| of the phasic energy equations at p_star
};

namespace detail {

struct RelaxScalar {
    double ie1, ie2, alpha1, alpha2, pI;
    double g1m, g2m; // gamma_j - 1
    double gp1, gp2; // gamma_j * pi_j
    double omega;
    double ig1m, ig2m; // 1/(gamma_j - 1)
    double dn1, dn2;   // omega * alpha_j, the numerator slopes
    double dd1, dd2;   // 1/(gamma_j - 1) + omega, the denominator slopes

    void finalize() {
        ig1m = 1.0 / g1m;
        ig2m = 1.0 / g2m;
        dn1 = omega * alpha1;
        dn2 = omega * alpha2;
        dd1 = ig1m + omega;
        dd2 = ig2m + omega;
    }

    double pbar(double p) const { return (1.0 - omega) * pI + omega * p; }

    double eval_g(double p) const {
        const double pb = pbar(p);
        const double n1 = ie1 + pb * alpha1, n2 = ie2 + pb * alpha2;
        const double d1 = (p + gp1) * ig1m + pb, d2 = (p + gp2) * ig2m + pb;
        return n1 / d1 + n2 / d2 - 1.0;
    }

    void eval(double p, double& g, double& dg) const {
        const double pb = pbar(p);
        const double n1 = ie1 + pb * alpha1, n2 = ie2 + pb * alpha2;
        const double d1 = (p + gp1) * ig1m + pb, d2 = (p + gp2) * ig2m + pb;
        g = n1 / d1 + n2 / d2 - 1.0;
        dg = (dn1 * d1 - n1 * dd1) / (d1 * d1) + (dn2 * d2 - n2 * dd2) / (d2 * d2);
    }

    double alpha1_of(double p) const {
        const double pb = pbar(p);
        return (ie1 + pb * alpha1) / ((p + gp1) * ig1m + pb);
    }

    // Largest pressure at which either denominator vanishes; g blows up
    // there, so the root search must stay strictly above it.
    double pole() const {
        const double c = (1.0 - omega) * pI;
        const double p1 = (-c * g1m - gp1) / (1.0 + omega * g1m);
        const double p2 = (-c * g2m - gp2) / (1.0 + omega * g2m);
        return std::max(p1, p2);
    }
};

} // namespace detail

inline RelaxationResult pressure_relax(const ConservedState& q,
                                       const PhaseEos& eos1, const PhaseEos& eos2,
                                       double omega = 0.5, RunStats* stats = nullptr) {
    if (!(q.m1 > 0.0) || !(q.m2 > 0.0))
        throw SolverError(ErrorCode::positivity, "pressure_relax: partial density <= 0");
    const double alpha1 = q.alpha1;
    if (!(alpha1 > 0.0) || !(alpha1 < 1.0))
        throw SolverError(ErrorCode::domain_error, "pressure_relax: alpha1 outside (0, 1)");
    const double alpha2 = 1.0 - alpha1;
    const double rho1 = q.m1 / alpha1, rho2 = q.m2 / alpha2;
    const double p1 = phase_pressure(q.ie1 / q.m1, rho1, eos1);
    const double p2 = phase_pressure(q.ie2 / q.m2, rho2, eos2);

    RelaxationResult res;
    res.state = q;
    res.p_reinit = 0.0;

    if (p1 == p2) { // already in equilibrium; nothing to exchange
        res.p_star = p1;
        res.iterations = 0;
        res.residual = 0.0;
        if (stats) stats->note_relax(0);
        return res;
    }

    detail::RelaxScalar sc;
    sc.ie1 = q.ie1;
    sc.ie2 = q.ie2;
    sc.alpha1 = alpha1;
    sc.alpha2 = alpha2;
    sc.pI = interface_pressure(p1, p2, phase_bulk_modulus(p1, rho1, eos1),
                               phase_bulk_modulus(p2, rho2, eos2));
    sc.g1m = eos1.gamma - 1.0;
    sc.g2m = eos2.gamma - 1.0;
    sc.gp1 = eos1.gamma * eos1.pi;
    sc.gp2 = eos2.gamma * eos2.pi;
    sc.omega = omega;
    sc.finalize();

    const double pole = sc.pole();
    const double span = std::abs(p1 - p2) + 1e-9 * (std::abs(p1) + std::abs(p2) + 1.0);
    double lo = std::min(p1, p2) - 0.01 * span;
    double hi = std::max(p1, p2) + 0.01 * span;
    // A phase pressure may sit below the pole (a strong expansion can pull a
    // stiff liquid negative); both ends must start strictly above it.
    if (hi <= pole) hi = pole + span + 1.0;
    if (lo <= pole) lo = pole + 0.125 * (hi - pole);

    int iters = 0;
    const int max_iters = 200;
    const double gtol = 1e-13;
    double p = std::min(std::max(alpha1 * p1 + alpha2 * p2, lo), hi);
    double g, dg;
    sc.eval(p, g, dg);

    if (std::abs(g) > gtol) {
        // Bracket the root before iterating; most calls never get here
        // because the seed already satisfies the tolerance.
        double glo = sc.eval_g(lo), ghi = sc.eval_g(hi);
        // Widen towards the pole / towards +inf until the root is bracketed.
        while (glo < 0.0 && iters < max_iters) {
            lo = pole + 0.5 * (lo - pole);
            glo = sc.eval_g(lo);
            ++iters;
        }
        while (ghi > 0.0 && iters < max_iters) {
            hi = hi + 2.0 * (hi - pole) + 1.0;
            ghi = sc.eval_g(hi);
            ++iters;
        }
        if (glo < 0.0 || ghi > 0.0)
            throw SolverError(ErrorCode::relaxation_failure,
                              "pressure_relax: could not bracket the equilibrium pressure "
                              "(p1 = " + std::to_string(p1) + ", p2 = " + std::to_string(p2) + ")");
        const double p_clamped = std::min(std::max(p, lo), hi);
        if (p_clamped != p) {
            p = p_clamped;
            sc.eval(p, g, dg);
        }
        while (std::abs(g) > gtol && iters < max_iters) {
            if (g > 0.0) lo = p; else hi = p;
            double step = (dg != 0.0) ? p - g / dg : lo - 1.0;
            if (!(step > lo) || !(step < hi)) step = 0.5 * (lo + hi); // bisect when Newton escapes
            if (step == p) break;                                     // bracket at rounding width
            p = step;
            sc.eval(p, g, dg);
            ++iters;
        }
    }
    if (std::abs(g) > 1e-9)
        throw SolverError(ErrorCode::relaxation_failure,
                          "pressure_relax: no convergence, |g| = " + std::to_string(std::abs(g)));

    const double alpha1s = sc.alpha1_of(p);
    if (!(alpha1s > 0.0) || !(alpha1s < 1.0))
        throw SolverError(ErrorCode::relaxation_failure,
                          "pressure_relax: equilibrium volume fraction " +
                              std::to_string(alpha1s) + " is not admissible");
    const double alpha1c = clamp_alpha(alpha1s, stats);

    res.state.alpha1 = alpha1c;
    res.state.ie1 = alpha1c * (p + sc.gp1) / sc.g1m;
    res.state.ie2 = (1.0 - alpha1c) * (p + sc.gp2) / sc.g2m;
    res.p_star = p;
    res.iterations = iters;

    const double pb = sc.pbar(p);
    const double eq1 = res.state.ie1 - (q.ie1 - pb * (alpha1c - alpha1));
    const double eq2 = res.state.ie2 - (q.ie2 - pb * ((1.0 - alpha1c) - alpha2));
    res.residual = std::abs(eq1) + std::abs(eq2);
    if (stats) stats->note_relax(static_cast<std::uint64_t>(iters));
    return res;
}

/*--- Reset the phasic internal energies from the conserved mixture total
      energy at the current volume fractions. Returns the mixture pressure
      implied by rho*e; both phases leave with exactly that pressure. ---*/

inline double reinitialize(ConservedState& q, const PhaseEos& eos1, const PhaseEos& eos2) {
    const double rho = q.m1 + q.m2;
    if (!(rho > 0.0))
        throw SolverError(ErrorCode::positivity, "reinitialize: rho <= 0");
    const double rhoe = q.E - 0.5 * (q.mx * q.mx + q.my * q.my) / rho;
    const double alpha1 = q.alpha1, alpha2 = 1.0 - q.alpha1;
    const double stiff = alpha1 * eos1.gamma * eos1.pi / (eos1.gamma - 1.0) +
                         alpha2 * eos2.gamma * eos2.pi / (eos2.gamma - 1.0);
    const double compress = alpha1 / (eos1.gamma - 1.0) + alpha2 / (eos2.gamma - 1.0);
    const double p = (rhoe - stiff) / compress;
    if (!(p + std::min(eos1.pi, eos2.pi) > 0.0))
        throw SolverError(ErrorCode::positivity,
                          "reinitialize: internal energy below the stiffened-gas floor, p = " +
                              std::to_string(p));
    q.ie1 = alpha1 * (p + eos1.gamma * eos1.pi) / (eos1.gamma - 1.0);
    q.ie2 = alpha2 * (p + eos2.gamma * eos2.pi) / (eos2.gamma - 1.0);
    return p;
}

// Full relaxation operator applied to one cell.
inline RelaxationResult relax_cell(const ConservedState& q,
                                   const PhaseEos& eos1, const PhaseEos& eos2,
                                   double omega = 0.5, RunStats* stats = nullptr) {
    RelaxationResult res = pressure_relax(q, eos1, eos2, omega, stats);
    res.p_reinit = reinitialize(res.state, eos1, eos2);
    return res;
}

} // namespace tpfv
