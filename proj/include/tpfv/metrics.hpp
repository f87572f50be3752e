#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tpfv/cases.hpp"
#include "tpfv/errors.hpp"
#include "tpfv/mesh.hpp"

namespace tpfv {

/*--- Snapshot and series metrics. Every function here is a pure function of
      its inputs: identical input produces bit-identical output, so a metric
      can be recomputed from a written snapshot without drift. ---*/

/*--- Largest pressure mismatch between cells mirrored about the vertical
      midline. The mesh itself must be mirror-symmetric; centroids of every
      mirrored pair are checked against the midline before any field value
      is touched. ---*/

inline double symmetry_error(const StructuredQuadMesh& mesh, const std::vector<double>& p) {
    if (static_cast<int>(p.size()) != mesh.cell_count())
        throw SolverError(ErrorCode::domain_error, "symmetry_error: field size mismatch");
    const auto [xn_min, xn_max] = std::minmax_element(mesh.node_x.begin(), mesh.node_x.end());
    const double span = *xn_max - *xn_min;
    const double mid2 = *xn_min + *xn_max; // twice the midline position
    const double tol = 1e-9 * span;
    double err = 0.0;
    for (int j = 0; j < mesh.ny; ++j) {
        for (int i = 0; i < mesh.nx; ++i) {
            const int c = mesh.cell_index(i, j);
            const int m = mesh.cell_index(mesh.nx - 1 - i, j);
            const auto cu = static_cast<std::size_t>(c);
            const auto mu = static_cast<std::size_t>(m);
            if (std::abs(mesh.cell_cx[cu] + mesh.cell_cx[mu] - mid2) > tol ||
                std::abs(mesh.cell_cy[cu] - mesh.cell_cy[mu]) > tol)
                throw SolverError(ErrorCode::domain_error,
                                  "symmetry_error: mesh is not mirror-symmetric about the midline");
            err = std::max(err, std::abs(p[cu] - p[mu]));
        }
    }
    return err;
}

/*--- Normalized spread of a pressure field: (max p - min p) / p_ref. ---*/

inline double pressure_fluctuation(const std::vector<double>& p, double p_ref) {
    if (p.empty())
        throw SolverError(ErrorCode::domain_error, "pressure_fluctuation: empty field");
    if (!(p_ref > 0.0))
        throw SolverError(ErrorCode::domain_error, "pressure_fluctuation: p_ref must be positive");
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    return (*hi - *lo) / p_ref;
}

/*--- Least-squares slope of log(fluctuation) against log(M). Needs at
      least three strictly positive points. ---*/

struct ScalePoint {
    double mach;
    double fluctuation;
};

inline double scaling_slope(const std::vector<ScalePoint>& pts) {
    if (pts.size() < 3)
        throw SolverError(ErrorCode::domain_error, "scaling_slope: needs at least 3 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pts) {
        if (!(p.mach > 0.0) || !(p.fluctuation > 0.0))
            throw SolverError(ErrorCode::domain_error, "scaling_slope: entries must be positive");
        sx += std::log(p.mach);
        sy += std::log(p.fluctuation);
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (const auto& p : pts) {
        const double dx = std::log(p.mach) - mx;
        num += dx * (std::log(p.fluctuation) - my);
        den += dx * dx;
    }
    if (!(den > 0.0))
        throw SolverError(ErrorCode::domain_error, "scaling_slope: Mach numbers must differ");
    return num / den;
}

/*--- Per-column interface heights: in each x-column, the linearly
      interpolated y where the given fraction field crosses the threshold
      (scanning upward, first sign change). Columns without a crossing are
      marked invalid. Also extracts the two scalar probes the closed-box
      cases need: the rightmost crossing along the floor row (dam front)
      and the height in the column hugging the left wall. ---*/

struct InterfaceContour {
    std::vector<double> x;      // column centroid positions
    std::vector<double> height; // crossing height, valid[i] only
    std::vector<char> valid;
    bool front_valid = false;
    double front_x = 0.0;
    bool left_valid = false;
    double left_wall_height = 0.0;
};

inline InterfaceContour interface_contour(const StructuredQuadMesh& mesh,
                                          const std::vector<double>& frac,
                                          double threshold = 0.5) {
    if (static_cast<int>(frac.size()) != mesh.cell_count())
        throw SolverError(ErrorCode::domain_error, "interface_contour: field size mismatch");
    InterfaceContour out;
    out.x.resize(static_cast<std::size_t>(mesh.nx));
    out.height.assign(static_cast<std::size_t>(mesh.nx), 0.0);
    out.valid.assign(static_cast<std::size_t>(mesh.nx), 0);

    for (int i = 0; i < mesh.nx; ++i) {
        out.x[static_cast<std::size_t>(i)] =
            mesh.cell_cx[static_cast<std::size_t>(mesh.cell_index(i, 0))];
        for (int j = 0; j + 1 < mesh.ny; ++j) {
            const auto c0 = static_cast<std::size_t>(mesh.cell_index(i, j));
            const auto c1 = static_cast<std::size_t>(mesh.cell_index(i, j + 1));
            const double a0 = frac[c0] - threshold;
            const double a1 = frac[c1] - threshold;
            if (a0 == 0.0 || a0 * a1 < 0.0) {
                const double y0 = mesh.cell_cy[c0], y1 = mesh.cell_cy[c1];
                const double h = (a0 == 0.0) ? y0 : y0 + a0 / (a0 - a1) * (y1 - y0);
                out.height[static_cast<std::size_t>(i)] = h;
                out.valid[static_cast<std::size_t>(i)] = 1;
                break;
            }
        }
    }
    if (mesh.nx > 0 && out.valid[0]) {
        out.left_valid = true;
        out.left_wall_height = out.height[0];
    }
    for (int i = mesh.nx - 2; i >= 0; --i) {
        const auto c0 = static_cast<std::size_t>(mesh.cell_index(i, 0));
        const auto c1 = static_cast<std::size_t>(mesh.cell_index(i + 1, 0));
        const double a0 = frac[c0] - threshold;
        const double a1 = frac[c1] - threshold;
        if (a0 == 0.0 || a0 * a1 < 0.0) {
            const double x0 = mesh.cell_cx[c0], x1 = mesh.cell_cx[c1];
            out.front_x = (a0 == 0.0) ? x0 : x0 + a0 / (a0 - a1) * (x1 - x0);
            out.front_valid = true;
            break;
        }
    }
    return out;
}

/*--- Oscillation period from mean-removed zero crossings: consecutive
      crossing times are interpolated linearly, the period is twice the mean
      crossing gap, and the uncertainty is half the sample spacing. Fewer
      than three crossings cannot pin a period and raise an error. ---*/

struct PeriodEstimate {
    double period;
    double uncertainty;
};

inline PeriodEstimate dominant_period(const TimeSeries& s) {
    const std::size_t n = s.size();
    if (n < 4)
        throw SolverError(ErrorCode::domain_error, "dominant_period: series too short");
    double mean = 0.0;
    for (double v : s.v) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> crossings;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a = s.v[k] - mean, b = s.v[k + 1] - mean;
        if (a == 0.0)
            crossings.push_back(s.t[k]);
        else if (a * b < 0.0)
            crossings.push_back(s.t[k] + a / (a - b) * (s.t[k + 1] - s.t[k]));
    }
    if (crossings.size() < 3)
        throw SolverError(ErrorCode::domain_error,
                          "dominant_period: fewer than three mean crossings");
    const double span = crossings.back() - crossings.front();
    const double period = 2.0 * span / static_cast<double>(crossings.size() - 1);
    const double dt_sample = (s.t.back() - s.t.front()) / static_cast<double>(n - 1);
    return {period, 0.5 * dt_sample};
}

/*--- Extremal x-positions of the region where the given fraction field is
      at least the threshold: the side facing the oncoming shock (largest x),
      the far side (smallest x), and the largest x on the centerline row
      (which tracks the jet once the upstream face folds in). ---*/

struct BubblePoints {
    double upstream_x;
    double downstream_x;
    double jet_x;
};

inline BubblePoints bubble_points(const StructuredQuadMesh& mesh,
                                  const std::vector<double>& frac,
                                  double threshold = 0.5) {
    if (static_cast<int>(frac.size()) != mesh.cell_count())
        throw SolverError(ErrorCode::domain_error, "bubble_points: field size mismatch");
    bool any = false, any_mid = false;
    double up = 0.0, down = 0.0, jet = 0.0;
    const int j_mid = mesh.ny / 2;
    for (int j = 0; j < mesh.ny; ++j) {
        for (int i = 0; i < mesh.nx; ++i) {
            const auto c = static_cast<std::size_t>(mesh.cell_index(i, j));
            if (!(frac[c] >= threshold)) continue;
            const double x = mesh.cell_cx[c];
            if (!any) {
                up = down = x;
                any = true;
            } else {
                up = std::max(up, x);
                down = std::min(down, x);
            }
            if (j == j_mid) {
                jet = any_mid ? std::max(jet, x) : x;
                any_mid = true;
            }
        }
    }
    if (!any || !any_mid)
        throw SolverError(ErrorCode::domain_error, "bubble_points: region is empty");
    return {up, down, jet};
}

/*--- Shading field exp(-k |grad rho| / max |grad rho|), values in (0, 1].
      Gradients are index-space central differences on the structured grid
      (one-sided at the boundary); this is a visualization field, not a
      derivative of record. A uniform field shades to exactly 1. ---*/

inline std::vector<double> numerical_schlieren(const StructuredQuadMesh& mesh,
                                               const std::vector<double>& rho,
                                               double k = 50.0) {
    if (static_cast<int>(rho.size()) != mesh.cell_count())
        throw SolverError(ErrorCode::domain_error, "numerical_schlieren: field size mismatch");
    const int nx = mesh.nx, ny = mesh.ny;
    std::vector<double> mag(rho.size(), 0.0);
    double gmax = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const auto c = static_cast<std::size_t>(mesh.cell_index(i, j));
            const int il = std::max(i - 1, 0), ir = std::min(i + 1, nx - 1);
            const int jl = std::max(j - 1, 0), jr = std::min(j + 1, ny - 1);
            const auto cxl = static_cast<std::size_t>(mesh.cell_index(il, j));
            const auto cxr = static_cast<std::size_t>(mesh.cell_index(ir, j));
            const auto cyl = static_cast<std::size_t>(mesh.cell_index(i, jl));
            const auto cyr = static_cast<std::size_t>(mesh.cell_index(i, jr));
            double gx = 0.0, gy = 0.0;
            if (ir != il) gx = (rho[cxr] - rho[cxl]) / (mesh.cell_cx[cxr] - mesh.cell_cx[cxl]);
            if (jr != jl) gy = (rho[cyr] - rho[cyl]) / (mesh.cell_cy[cyr] - mesh.cell_cy[cyl]);
            mag[c] = std::sqrt(gx * gx + gy * gy);
            gmax = std::max(gmax, mag[c]);
        }
    }
    std::vector<double> out(rho.size(), 1.0);
    if (gmax > 0.0)
        for (std::size_t c = 0; c < out.size(); ++c) out[c] = std::exp(-k * mag[c] / gmax);
    return out;
}

/*--- Column geometry helpers for quasi-1D comparisons: per-column duct
      height (top boundary minus bottom boundary at the column center) and
      the area-weighted column average of a cell field. ---*/

inline std::vector<double> column_heights(const StructuredQuadMesh& mesh) {
    std::vector<double> h(static_cast<std::size_t>(mesh.nx));
    const int stride = mesh.nx + 1;
    for (int i = 0; i < mesh.nx; ++i) {
        const auto b0 = static_cast<std::size_t>(i);
        const auto t0 = static_cast<std::size_t>(mesh.ny * stride + i);
        const double yb = 0.5 * (mesh.node_y[b0] + mesh.node_y[b0 + 1]);
        const double yt = 0.5 * (mesh.node_y[t0] + mesh.node_y[t0 + 1]);
        h[static_cast<std::size_t>(i)] = yt - yb;
    }
    return h;
}

inline std::vector<double> column_average(const StructuredQuadMesh& mesh,
                                          const std::vector<double>& f) {
    if (static_cast<int>(f.size()) != mesh.cell_count())
        throw SolverError(ErrorCode::domain_error, "column_average: field size mismatch");
    std::vector<double> avg(static_cast<std::size_t>(mesh.nx));
    for (int i = 0; i < mesh.nx; ++i) {
        double num = 0.0, den = 0.0;
        for (int j = 0; j < mesh.ny; ++j) {
            const auto c = static_cast<std::size_t>(mesh.cell_index(i, j));
            num += f[c] * mesh.cell_area[c];
            den += mesh.cell_area[c];
        }
        avg[static_cast<std::size_t>(i)] = num / den;
    }
    return avg;
}

/*--- Incompressible quasi-1D duct reference: u(x) = u_in A_in / A(x) from
      volume conservation and p(x) = p_out + rho (u_out^2 - u(x)^2) / 2 from
      Bernoulli, with u_out = u_in A_in / A_out. Valid only for a nearly
      incompressible liquid-dominated stream: every local Mach number must
      stay at or below 0.05, the stream stiffness rho a^2 must sit at least
      two decades above the pressure scale (a gas has rho a^2 ~ gamma p and
      is rejected), and the Bernoulli swing may not move the density by more
      than 1% (dp / (rho a^2) <= 0.01). Violations raise errors instead of
      returning an extrapolated table. ---*/

struct Quasi1DTable {
    std::vector<double> x, u, p;
};

inline Quasi1DTable quasi_1d_reference(const std::vector<double>& x,
                                       const std::vector<double>& area,
                                       double rho, double u_in, double sound_speed,
                                       double p_out) {
    if (x.size() != area.size() || x.empty())
        throw SolverError(ErrorCode::domain_error, "quasi_1d_reference: bad table shape");
    if (!(rho > 0.0) || !(sound_speed > 0.0))
        throw SolverError(ErrorCode::domain_error, "quasi_1d_reference: bad inlet state");
    for (double a : area)
        if (!(a > 0.0))
            throw SolverError(ErrorCode::domain_error, "quasi_1d_reference: nonpositive area");

    const double q = u_in * area.front(); // volume flux per unit depth
    const double u_out = q / area.back();
    Quasi1DTable out;
    out.x = x;
    out.u.resize(x.size());
    out.p.resize(x.size());
    double m_max = 0.0, dp_max = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = q / area[i];
        const double p = p_out + 0.5 * rho * (u_out * u_out - u * u);
        out.u[i] = u;
        out.p[i] = p;
        m_max = std::max(m_max, std::abs(u) / sound_speed);
        dp_max = std::max(dp_max, std::abs(p - p_out));
    }
    if (m_max > 0.05)
        throw SolverError(ErrorCode::domain_error,
                          "quasi_1d_reference: local Mach number exceeds the 0.05 validity bound");
    if (rho * sound_speed * sound_speed < 100.0 * std::abs(p_out))
        throw SolverError(ErrorCode::domain_error,
                          "quasi_1d_reference: stream is not liquid-dominated (rho a^2 < 100 p)");
    if (dp_max > 0.01 * rho * sound_speed * sound_speed)
        throw SolverError(ErrorCode::domain_error,
                          "quasi_1d_reference: pressure swing implies density variation above 1%");
    return out;
}

} // namespace tpfv
