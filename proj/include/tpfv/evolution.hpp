#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tpfv/errors.hpp"
#include "tpfv/mesh.hpp"
#include "tpfv/parallel.hpp"
#include "tpfv/reconstruction.hpp"
#include "tpfv/relaxation.hpp"
#include "tpfv/riemann.hpp"

namespace tpfv {

struct SchemeConfig {
    int order = 2;          // 1: cell-constant faces, 2: SDWLS reconstruction
    bool correction = true; // low-Mach velocity-jump scaling at faces
    bool overbee = false;   // sharpening limiter on alpha1 (second order only)
    double cfl = 0.5;
    double omega = 0.5;     // interface-pressure blend in the relaxation
    double gravity_x = 0.0;
    double gravity_y = 0.0;
    int threads = 1;
};

/*--- Boundary data. Subsonic inlet: composition and velocity imposed,
      pressures taken from the interior. Subsonic outlet: both phasic
      pressures pinned, the rest taken from the interior. Slip wall: mirror
      state with the normal velocity reversed.

      At faces the condition is applied to the reconstructed inner trace, so
      a wall face sees an exactly colliding pair and passes no mass or energy
      at either order. Gradient stencils use cell-value ghosts. ---*/

struct BoundaryValues {
    double inlet_alpha1 = 0.5;
    double inlet_rho1 = 1.0, inlet_rho2 = 1.0;
    double inlet_u = 0.0, inlet_v = 0.0;
    double outlet_p = 1e5;
};

inline PrimitiveState ghost_state(const PrimitiveState& inner, BoundaryTag tag,
                                  double face_nx, double face_ny, const BoundaryValues& bv) {
    PrimitiveState g = inner;
    switch (tag) {
    case BoundaryTag::slip_wall: {
        const double un = inner.u * face_nx + inner.v * face_ny;
        g.u = inner.u - 2.0 * un * face_nx;
        g.v = inner.v - 2.0 * un * face_ny;
        break;
    }
    case BoundaryTag::inlet:
        g.alpha1 = bv.inlet_alpha1;
        g.rho1 = bv.inlet_rho1;
        g.rho2 = bv.inlet_rho2;
        g.u = bv.inlet_u;
        g.v = bv.inlet_v;
        break;
    case BoundaryTag::outlet:
        g.p1 = bv.outlet_p;
        g.p2 = bv.outlet_p;
        break;
    case BoundaryTag::interior:
        throw SolverError(ErrorCode::invariant_violation, "ghost_state: interior face");
    }
    return g;
}

/*--- Finite-volume evolution operator on one mesh: decode, ghost fill,
      reconstruction, one HLLC solve per face, deterministic per-cell
      accumulation, explicit SSPRK stepping with the pressure relaxation
      applied after every stage and once more after the stage average. ---*/

class FlowSolver {
public:
    FlowSolver(const StructuredQuadMesh& mesh, const PhaseEos& eos1, const PhaseEos& eos2,
               const SchemeConfig& cfg = {}, const BoundaryValues& bv = {})
        : mesh_(mesh), eos1_(eos1), eos2_(eos2), cfg_(cfg), bv_(bv) {
        const int nc = mesh_.cell_count();
        U_.resize(nc);
        prim7_.resize(nc);
        amix_.resize(nc);
        grad_.resize(nc);
        ghost7_.resize(mesh_.ghost_count());
        fout_.resize(mesh_.faces.size());
        rate_.resize(nc);
        stage1_.resize(nc);
        stage2_.resize(nc);
    }

    const StructuredQuadMesh& mesh() const { return mesh_; }
    const PhaseEos& eos1() const { return eos1_; }
    const PhaseEos& eos2() const { return eos2_; }
    SchemeConfig& config() { return cfg_; }
    BoundaryValues& boundary_values() { return bv_; }
    RunStats& stats() { return stats_; }

    std::vector<ConservedState>& field() { return U_; }
    const std::vector<ConservedState>& field() const { return U_; }

    void set_initial(const std::vector<PrimitiveState>& w) {
        if (static_cast<int>(w.size()) != mesh_.cell_count())
            throw SolverError(ErrorCode::invariant_violation, "set_initial: size mismatch");
        for (int c = 0; c < mesh_.cell_count(); ++c)
            U_[c] = primitive_to_conserved(w[c], eos1_, eos2_);
    }

    std::vector<PrimitiveState> primitives() const {
        std::vector<PrimitiveState> w(U_.size());
        for (std::size_t c = 0; c < U_.size(); ++c)
            w[c] = conserved_to_primitive(U_[c], eos1_, eos2_);
        return w;
    }

    /*--- Largest stable explicit step: CFL * min over cells of the
          incircle-like cell length divided by |u| + a. ---*/
    double stable_time_step() {
        decode(U_);
        const int nc = mesh_.cell_count();
        if (scratch_.size() != static_cast<std::size_t>(nc)) scratch_.resize(nc);
        parallel_for(nc, cfg_.threads, [&](int b, int e) {
            for (int c = b; c < e; ++c) {
                const double speed =
                    std::sqrt(prim7_[c][3] * prim7_[c][3] + prim7_[c][4] * prim7_[c][4]) + amix_[c];
                scratch_[c] = mesh_.cell_d[c] / speed;
            }
        });
        double dmin = std::numeric_limits<double>::infinity();
        for (int c = 0; c < nc; ++c) dmin = std::min(dmin, scratch_[c]);
        if (!(dmin > 0.0) || !std::isfinite(dmin))
            throw SolverError(ErrorCode::solver_abort, "stable_time_step: nonpositive step");
        return cfg_.cfl * dmin;
    }

    // Semi-discrete rate dU/dt of the hyperbolic operator (plus gravity).
    void compute_rate(const std::vector<ConservedState>& U, std::vector<ConservedState>& rate) {
        decode(U);
        fill_ghosts();
        const bool second = (cfg_.order == 2);
        if (second) compute_gradients();
        face_sweep(second);
        assemble(rate);
    }

    // One full time step (hyperbolic + relaxation, first or second order).
    void advance(double dt) {
        if (cfg_.order == 1) {
            euler_stage(U_, dt, stage1_);
            relax_field(stage1_);
            U_.swap(stage1_);
            return;
        }
        euler_stage(U_, dt, stage1_);
        relax_field(stage1_);
        euler_stage(stage1_, dt, stage2_);
        relax_field(stage2_);
        const int nc = mesh_.cell_count();
        parallel_for(nc, cfg_.threads, [&](int b, int e) {
            for (int c = b; c < e; ++c) {
                ConservedState& q = stage2_[c];
                const ConservedState& q0 = U_[c];
                q.alpha1 = 0.5 * (q0.alpha1 + q.alpha1);
                q.m1 = 0.5 * (q0.m1 + q.m1);
                q.m2 = 0.5 * (q0.m2 + q.m2);
                q.mx = 0.5 * (q0.mx + q.mx);
                q.my = 0.5 * (q0.my + q.my);
                q.E = 0.5 * (q0.E + q.E);
                q.ie1 = 0.5 * (q0.ie1 + q.ie1);
                q.ie2 = 0.5 * (q0.ie2 + q.ie2);
            }
        });
        relax_field(stage2_);
        U_.swap(stage2_);
    }

    void relax_field(std::vector<ConservedState>& U) {
        parallel_for(mesh_.cell_count(), cfg_.threads, [&](int b, int e) {
            for (int c = b; c < e; ++c) {
                try {
                    U[c] = relax_cell(U[c], eos1_, eos2_, cfg_.omega, &stats_).state;
                } catch (const SolverError& err) {
                    throw SolverError(err.code(), cell_context(c) + ": " + err.what());
                }
            }
        });
    }

    // Volume-integrated conserved quantities [m1, m2, mx, my, E]; fixed
    // sequential summation order.
    std::array<double, 5> conserved_totals(const std::vector<ConservedState>& U) const {
        std::array<double, 5> t{0.0, 0.0, 0.0, 0.0, 0.0};
        for (int c = 0; c < mesh_.cell_count(); ++c) {
            const double a = mesh_.cell_area[c];
            t[0] += a * U[c].m1;
            t[1] += a * U[c].m2;
            t[2] += a * U[c].mx;
            t[3] += a * U[c].my;
            t[4] += a * U[c].E;
        }
        return t;
    }

    // Exposed for boundary-condition tests: ghost primitives for a field.
    const std::vector<Prim7>& ghost_primitives(const std::vector<ConservedState>& U) {
        decode(U);
        fill_ghosts();
        return ghost7_;
    }

private:
    std::string cell_context(int c) const {
        const int i = c % mesh_.nx, j = c / mesh_.nx;
        return "cell (" + std::to_string(i) + ", " + std::to_string(j) + ") at (" +
               std::to_string(mesh_.cell_cx[c]) + ", " + std::to_string(mesh_.cell_cy[c]) + ")";
    }

    void decode(const std::vector<ConservedState>& U) {
        parallel_for(mesh_.cell_count(), cfg_.threads, [&](int b, int e) {
            for (int c = b; c < e; ++c) {
                try {
                    const PrimitiveState w = conserved_to_primitive(U[c], eos1_, eos2_, &stats_);
                    prim7_[c] = to_prim7(w);
                    amix_[c] = mixture_sound_speed(w.alpha1, w.rho1, w.p1, 1.0 - w.alpha1,
                                                   w.rho2, w.p2, eos1_, eos2_);
                } catch (const SolverError& err) {
                    throw SolverError(err.code(), cell_context(c) + ": " + err.what());
                }
            }
        });
    }

    void fill_ghosts() {
        const int ng = mesh_.ghost_count();
        parallel_for(ng, cfg_.threads, [&](int b, int e) {
            for (int g = b; g < e; ++g) {
                const auto& f = mesh_.faces[mesh_.ghost_face[g]];
                const int inner = (f.left >= 0) ? f.left : f.right;
                const PrimitiveState w = from_prim7(prim7_[inner]);
                ghost7_[g] = to_prim7(ghost_state(w, f.tag, f.nx_n, f.ny_n, bv_));
            }
        });
    }

    void compute_gradients() {
        parallel_for(mesh_.cell_count(), cfg_.threads, [&](int b, int e) {
            StencilPoint pts[4];
            for (int c = b; c < e; ++c) {
                for (int k = 0; k < 4; ++k) {
                    const auto& f = mesh_.faces[mesh_.cell_faces[c][k]];
                    const int other = (f.left == c) ? f.right : f.left;
                    if (other >= 0) {
                        pts[k].dx = mesh_.cell_cx[other] - mesh_.cell_cx[c];
                        pts[k].dy = mesh_.cell_cy[other] - mesh_.cell_cy[c];
                        pts[k].w = prim7_[other];
                    } else {
                        pts[k].dx = mesh_.ghost_cx[f.ghost] - mesh_.cell_cx[c];
                        pts[k].dy = mesh_.ghost_cy[f.ghost] - mesh_.cell_cy[c];
                        pts[k].w = ghost7_[f.ghost];
                    }
                }
                grad_[c] = sdwls_gradient(prim7_[c], pts, 4, &stats_);
            }
        });
    }

    struct FaceOut {
        double m1, m2, fx, fy, E; // conservative flux, momentum in global frame
        double un, a1un, e1un, e2un;
    };

    void face_sweep(bool second) {
        const int nf = static_cast<int>(mesh_.faces.size());
        parallel_for(nf, cfg_.threads, [&](int b, int e) {
            for (int fi = b; fi < e; ++fi) {
                const auto& f = mesh_.faces[fi];
                Prim7 wl{}, wr{};
                if (f.left >= 0)
                    wl = second ? face_extrapolate(prim7_[f.left], grad_[f.left],
                                                   f.mid_x - mesh_.cell_cx[f.left],
                                                   f.mid_y - mesh_.cell_cy[f.left],
                                                   eos1_, eos2_, &stats_)
                                : prim7_[f.left];
                if (f.right >= 0)
                    wr = second ? face_extrapolate(prim7_[f.right], grad_[f.right],
                                                   f.mid_x - mesh_.cell_cx[f.right],
                                                   f.mid_y - mesh_.cell_cy[f.right],
                                                   eos1_, eos2_, &stats_)
                                : prim7_[f.right];
                if (f.left < 0)
                    wl = to_prim7(ghost_state(from_prim7(wr), f.tag, f.nx_n, f.ny_n, bv_));
                else if (f.right < 0)
                    wr = to_prim7(ghost_state(from_prim7(wl), f.tag, f.nx_n, f.ny_n, bv_));
                if (second && cfg_.overbee) {
                    const double al_raw = (f.left >= 0) ? prim7_[f.left][0] : ghost7_[f.ghost][0];
                    const double ar_raw = (f.right >= 0) ? prim7_[f.right][0] : ghost7_[f.ghost][0];
                    if (f.left >= 0)
                        wl[0] = (f.upwind_left >= 0)
                                    ? overbee_face_value(prim7_[f.upwind_left][0], al_raw, ar_raw)
                                    : al_raw;
                    if (f.right >= 0)
                        wr[0] = (f.upwind_right >= 0)
                                    ? overbee_face_value(prim7_[f.upwind_right][0], ar_raw, al_raw)
                                    : ar_raw;
                }

                try {
                    const FaceSide L = make_face_side(from_prim7(wl), f.nx_n, f.ny_n, eos1_, eos2_);
                    const FaceSide R = make_face_side(from_prim7(wr), f.nx_n, f.ny_n, eos1_, eos2_);
                    const InterfaceSolution sol =
                        hllc_interface_solution(L, R, eos1_, eos2_, cfg_.correction, &stats_);
                    FaceOut& o = fout_[fi];
                    o.m1 = sol.flux[0];
                    o.m2 = sol.flux[1];
                    o.fx = f.nx_n * sol.flux[2] - f.ny_n * sol.flux[3];
                    o.fy = f.ny_n * sol.flux[2] + f.nx_n * sol.flux[3];
                    o.E = sol.flux[4];
                    o.un = sol.un;
                    o.a1un = sol.alpha1_un;
                    o.e1un = sol.ie1_un;
                    o.e2un = sol.ie2_un;
                } catch (const SolverError& err) {
                    throw SolverError(err.code(),
                                      "face at (" + std::to_string(f.mid_x) + ", " +
                                          std::to_string(f.mid_y) + "): " + err.what());
                }
            }
        });
    }

    void assemble(std::vector<ConservedState>& rate) {
        constexpr auto signs = StructuredQuadMesh::face_signs();
        parallel_for(mesh_.cell_count(), cfg_.threads, [&](int b, int e) {
            for (int c = b; c < e; ++c) {
                const double inv_area = 1.0 / mesh_.cell_area[c];
                const Prim7& w = prim7_[c];
                const double a1 = w[0];
                const double a1p1 = w[0] * w[5];
                const double a2p2 = (1.0 - w[0]) * w[6];
                ConservedState r{};
                for (int k = 0; k < 4; ++k) {
                    const int fi = mesh_.cell_faces[c][k];
                    const auto& f = mesh_.faces[fi];
                    const FaceOut& o = fout_[fi];
                    const double sw = signs[k] * f.length * inv_area;
                    r.alpha1 += sw * (o.a1un - a1 * o.un);
                    r.m1 += sw * o.m1;
                    r.m2 += sw * o.m2;
                    r.mx += sw * o.fx;
                    r.my += sw * o.fy;
                    r.E += sw * o.E;
                    r.ie1 += sw * (o.e1un + a1p1 * o.un);
                    r.ie2 += sw * (o.e2un + a2p2 * o.un);
                }
                if (cfg_.gravity_x != 0.0 || cfg_.gravity_y != 0.0) {
                    const double rho = w[0] * w[1] + (1.0 - w[0]) * w[2];
                    r.mx += rho * cfg_.gravity_x;
                    r.my += rho * cfg_.gravity_y;
                    r.E += rho * (w[3] * cfg_.gravity_x + w[4] * cfg_.gravity_y);
                }
                rate[c] = r;
            }
        });
    }

    void euler_stage(const std::vector<ConservedState>& src, double dt,
                     std::vector<ConservedState>& out) {
        compute_rate(src, rate_);
        parallel_for(mesh_.cell_count(), cfg_.threads, [&](int b, int e) {
            for (int c = b; c < e; ++c) {
                ConservedState q = src[c];
                const ConservedState& r = rate_[c];
                q.alpha1 += dt * r.alpha1;
                q.m1 += dt * r.m1;
                q.m2 += dt * r.m2;
                q.mx += dt * r.mx;
                q.my += dt * r.my;
                q.E += dt * r.E;
                q.ie1 += dt * r.ie1;
                q.ie2 += dt * r.ie2;
                q.alpha1 = clamp_alpha(q.alpha1, &stats_);
                if (!(q.m1 > 0.0) || !(q.m2 > 0.0) || !std::isfinite(q.m1 + q.m2 + q.mx + q.my + q.E + q.ie1 + q.ie2))
                    throw SolverError(ErrorCode::solver_abort,
                                      cell_context(c) + ": inadmissible state after update (m1 = " +
                                          std::to_string(q.m1) + ", m2 = " + std::to_string(q.m2) + ")");
                out[c] = q;
            }
        });
    }

    const StructuredQuadMesh& mesh_;
    PhaseEos eos1_, eos2_;
    SchemeConfig cfg_;
    BoundaryValues bv_;
    RunStats stats_;

    std::vector<ConservedState> U_;
    std::vector<Prim7> prim7_;
    std::vector<double> amix_;
    std::vector<double> scratch_;
    std::vector<CellGradient> grad_;
    std::vector<Prim7> ghost7_;
    std::vector<FaceOut> fout_;
    std::vector<ConservedState> rate_, stage1_, stage2_;
};

} // namespace tpfv
