#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "tpfv/eos.hpp"
#include "tpfv/errors.hpp"
#include "tpfv/state.hpp"

namespace tpfv {

/*--- Second-order reconstruction of the primitive set

          W = [alpha1, rho1, rho2, u, v, p1, p2]

      with solution-dependent weighted least squares: each neighbor delta is
      weighted by the inverse square of its own (nondimensionalized) size, so
      smooth data reconstructs linearly exactly while deltas across a
      discontinuity lose their influence on the gradient. ---*/

inline constexpr int n_prim = 7;
using Prim7 = std::array<double, n_prim>;

inline Prim7 to_prim7(const PrimitiveState& w) {
    return {w.alpha1, w.rho1, w.rho2, w.u, w.v, w.p1, w.p2};
}

inline PrimitiveState from_prim7(const Prim7& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
}

struct CellGradient {
    Prim7 gx{}, gy{};
};

struct StencilPoint {
    double dx, dy; // neighbor centroid minus cell centroid
    Prim7 w;       // neighbor primitives
};

/*--- Weighted least-squares gradient of one cell from up to four neighbor
      deltas. Weights are proportional to

          w_l = 1 / ((delta_l / (|W_i| + 1))^2 + 1e-12)

      per variable; since a least-squares fit is invariant under a common
      weight scale they are realized as cofactor products (each point gets
      the product of the other points' denominators), which needs no division.
      A (near-)collinear stencil yields a zero gradient for every variable and
      bumps the event counter. ---*/

inline CellGradient sdwls_gradient(const Prim7& wi,
                                   const StencilPoint* pts, int n_pts,
                                   RunStats* stats = nullptr) {
    if (n_pts < 2)
        throw SolverError(ErrorCode::domain_error, "sdwls_gradient: needs at least 2 neighbors");
    if (n_pts > 4)
        throw SolverError(ErrorCode::domain_error, "sdwls_gradient: quad cells have at most 4 neighbors");
    // Stencil geometry products are the same for every variable.
    double pxx[4], pxy[4], pyy[4];
    const int nl = n_pts;
    for (int l = 0; l < nl; ++l) {
        pxx[l] = pts[l].dx * pts[l].dx;
        pxy[l] = pts[l].dx * pts[l].dy;
        pyy[l] = pts[l].dy * pts[l].dy;
    }
    CellGradient g;
    bool degenerate = false;
    for (int v = 0; v < n_prim; ++v) {
        const double scale = 1.0 / (std::abs(wi[v]) + 1.0);
        double q[4], dwv[4];
        for (int l = 0; l < n_pts; ++l) {
            const double dw = pts[l].w[v] - wi[v];
            const double dhat = dw * scale;
            q[l] = dhat * dhat + 1e-12;
            dwv[l] = dw;
        }
        double wl[4];
        if (n_pts == 2) {
            wl[0] = q[1];
            wl[1] = q[0];
        } else if (n_pts == 3) {
            wl[0] = q[1] * q[2];
            wl[1] = q[0] * q[2];
            wl[2] = q[0] * q[1];
        } else {
            const double q01 = q[0] * q[1], q23 = q[2] * q[3];
            wl[0] = q[1] * q23;
            wl[1] = q[0] * q23;
            wl[2] = q01 * q[3];
            wl[3] = q01 * q[2];
        }
        double sxx = 0.0, sxy = 0.0, syy = 0.0, bx = 0.0, by = 0.0;
        for (int l = 0; l < n_pts; ++l) {
            const double wdw = wl[l] * dwv[l];
            sxx += wl[l] * pxx[l];
            sxy += wl[l] * pxy[l];
            syy += wl[l] * pyy[l];
            bx += wdw * pts[l].dx;
            by += wdw * pts[l].dy;
        }
        const double det = sxx * syy - sxy * sxy;
        if (!(det > 1e-12 * sxx * syy)) {
            g.gx[v] = 0.0;
            g.gy[v] = 0.0;
            degenerate = true;
            continue;
        }
        const double inv_det = 1.0 / det;
        g.gx[v] = (syy * bx - sxy * by) * inv_det;
        g.gy[v] = (sxx * by - sxy * bx) * inv_det;
    }
    if (degenerate && stats)
        stats->collinear_stencils.fetch_add(1, std::memory_order_relaxed);
    return g;
}

/*--- Linear extrapolation of the cell primitives to a face point, with a
      per-variable first-order fallback whenever the extrapolated value
      leaves its admissible range (alpha1 in [eps, 1-eps], rho_j > 0,
      p_j + pi_j > 0). Velocities are unconstrained. ---*/

inline Prim7 face_extrapolate(const Prim7& wi, const CellGradient& g,
                              double dx, double dy,
                              const PhaseEos& eos1, const PhaseEos& eos2,
                              RunStats* stats = nullptr) {
    Prim7 wf;
    for (int v = 0; v < n_prim; ++v) wf[v] = wi[v] + g.gx[v] * dx + g.gy[v] * dy;

    auto fall_back = [&](int v) {
        wf[v] = wi[v];
        if (stats) stats->first_order_fallbacks.fetch_add(1, std::memory_order_relaxed);
    };
    if (!(wf[0] >= eps_alpha && wf[0] <= 1.0 - eps_alpha)) fall_back(0);
    if (!(wf[1] > 0.0)) fall_back(1);
    if (!(wf[2] > 0.0)) fall_back(2);
    if (!(wf[5] + eos1.pi > 0.0)) fall_back(5);
    if (!(wf[6] + eos2.pi > 0.0)) fall_back(6);
    return wf;
}

/*--- Anti-diffusive face value for the volume fraction (interface
      sharpening). phi(r) = max(0, min(2r, 2)) sits on the upper boundary of
      the second-order TVD region; with locally linear data it returns the
      downwind value, steepening the interface instead of smearing it.
      a_prev is the value one cell behind the reconstructing side, a_down the
      value across the face. ---*/

inline double overbee_face_value(double a_prev, double a_c, double a_down) {
    const double d = a_down - a_c;
    if (d == 0.0) return a_c;
    const double r = (a_c - a_prev) / d;
    const double phi = std::max(0.0, std::min(2.0 * r, 2.0));
    const double face = a_c + 0.5 * phi * d;
    return std::min(std::max(face, eps_alpha), 1.0 - eps_alpha);
}

} // namespace tpfv
