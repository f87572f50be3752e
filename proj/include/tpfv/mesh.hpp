#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tpfv/errors.hpp"

namespace tpfv {

enum class BoundaryTag { interior, slip_wall, inlet, outlet };

/*--- Structured quadrilateral mesh.

      Cells are indexed c = j*nx + i. Faces are stored in a fixed order:
      all "i-faces" (normals pointing towards +x) first, then all "j-faces"
      (normals towards +y). A face always points from its left entity to its
      right entity; on the boundary the missing side is a ghost cell whose
      centroid is the interior centroid mirrored across the face line.

      The deterministic face order and the per-cell face table are what the
      residual assembly relies on: every sweep accumulates in the same
      sequence no matter how work is split across threads. ---*/

struct StructuredQuadMesh {
    struct Face {
        double nx_n, ny_n;   // unit normal, left -> right
        double length;
        double mid_x, mid_y; // midpoint of the two face nodes
        int left, right;     // cell indices; -1 when that side is a ghost
        int ghost;           // ghost id for boundary faces, else -1
        int upwind_left;     // cell one step behind the left cell along the face axis (-1: none)
        int upwind_right;    // cell one step beyond the right cell (-1: none)
        int axis;            // 0: i-face, 1: j-face
        BoundaryTag tag;
    };

    int nx = 0, ny = 0;
    std::vector<double> node_x, node_y;     // (nx+1)*(ny+1), node n = j*(nx+1) + i
    std::vector<double> cell_cx, cell_cy;   // centroids
    std::vector<double> cell_area;
    std::vector<double> cell_d;             // incircle-like length 4*area/perimeter
    std::vector<Face> faces;
    std::vector<std::array<int, 4>> cell_faces; // per cell: [W, E, S, N]
    std::vector<double> ghost_cx, ghost_cy;     // mirrored centroids per ghost
    std::vector<int> ghost_face;                // owning boundary face per ghost

    int cell_count() const { return nx * ny; }
    int ghost_count() const { return static_cast<int>(ghost_cx.size()); }

    int cell_index(int i, int j) const { return j * nx + i; }
    int node_index(int i, int j) const { return j * (nx + 1) + i; }

    // Assembly sign: +1 where the cell sits on the right of the face
    // (W and S slots), -1 where it is the left entity (E and N slots).
    static constexpr std::array<double, 4> face_signs() { return {+1.0, -1.0, +1.0, -1.0}; }
};

namespace detail {

inline void mirror_point(double px, double py, double ax, double ay, double bx, double by,
                         double& mx, double& my) {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    const double t = ((px - ax) * dx + (py - ay) * dy) / len2;
    const double fx = ax + t * dx, fy = ay + t * dy;
    mx = 2.0 * fx - px;
    my = 2.0 * fy - py;
}

// Area and centroid of the quad with CCW nodes (x0..x3, y0..y3).
inline void quad_geometry(const double* x, const double* y, double& area,
                          double& cx, double& cy) {
    double a2 = 0.0, sx = 0.0, sy = 0.0;
    for (int k = 0; k < 4; ++k) {
        const int k1 = (k + 1) % 4;
        const double cross = x[k] * y[k1] - x[k1] * y[k];
        a2 += cross;
        sx += (x[k] + x[k1]) * cross;
        sy += (y[k] + y[k1]) * cross;
    }
    area = 0.5 * a2;
    cx = sx / (3.0 * a2);
    cy = sy / (3.0 * a2);
}

} // namespace detail

/*--- Build the mesh from an explicit node lattice. The lattice must describe
      strictly positive-area, CCW-ordered quads. ---*/

inline StructuredQuadMesh build_structured_mesh(int nx, int ny,
                                                const std::vector<double>& node_x,
                                                const std::vector<double>& node_y) {
    if (nx < 1 || ny < 1)
        throw SolverError(ErrorCode::mesh_error, "build_structured_mesh: nx, ny must be >= 1");
    const std::size_t n_nodes = static_cast<std::size_t>(nx + 1) * (ny + 1);
    if (node_x.size() != n_nodes || node_y.size() != n_nodes)
        throw SolverError(ErrorCode::mesh_error, "build_structured_mesh: node count mismatch");

    StructuredQuadMesh m;
    m.nx = nx;
    m.ny = ny;
    m.node_x = node_x;
    m.node_y = node_y;

    const int n_cells = nx * ny;
    m.cell_cx.resize(n_cells);
    m.cell_cy.resize(n_cells);
    m.cell_area.resize(n_cells);
    m.cell_d.resize(n_cells);
    m.cell_faces.resize(n_cells);

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int n00 = m.node_index(i, j), n10 = m.node_index(i + 1, j);
            const int n11 = m.node_index(i + 1, j + 1), n01 = m.node_index(i, j + 1);
            const double xs[4] = {node_x[n00], node_x[n10], node_x[n11], node_x[n01]};
            const double ys[4] = {node_y[n00], node_y[n10], node_y[n11], node_y[n01]};
            double area, cx, cy;
            detail::quad_geometry(xs, ys, area, cx, cy);
            if (!(area > 0.0))
                throw SolverError(ErrorCode::mesh_error,
                                  "build_structured_mesh: nonpositive cell area at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            const int c = m.cell_index(i, j);
            m.cell_area[c] = area;
            m.cell_cx[c] = cx;
            m.cell_cy[c] = cy;
        }
    }

    auto add_ghost = [&m](int face_id, double px, double py, double ax, double ay,
                          double bx, double by) {
        double gx, gy;
        detail::mirror_point(px, py, ax, ay, bx, by, gx, gy);
        m.ghost_cx.push_back(gx);
        m.ghost_cy.push_back(gy);
        m.ghost_face.push_back(face_id);
        return static_cast<int>(m.ghost_cx.size()) - 1;
    };

    // i-faces: between nodes (i, j) and (i, j+1); normal towards +x.
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const int na = m.node_index(i, j), nb = m.node_index(i, j + 1);
            StructuredQuadMesh::Face f;
            const double dx = node_x[nb] - node_x[na], dy = node_y[nb] - node_y[na];
            f.length = std::sqrt(dx * dx + dy * dy);
            if (!(f.length > 0.0))
                throw SolverError(ErrorCode::mesh_error, "build_structured_mesh: zero-length face");
            f.nx_n = dy / f.length;
            f.ny_n = -dx / f.length;
            f.mid_x = 0.5 * (node_x[na] + node_x[nb]);
            f.mid_y = 0.5 * (node_y[na] + node_y[nb]);
            f.left = (i > 0) ? m.cell_index(i - 1, j) : -1;
            f.right = (i < nx) ? m.cell_index(i, j) : -1;
            f.upwind_left = (i > 1) ? m.cell_index(i - 2, j) : -1;
            f.upwind_right = (i < nx - 1) ? m.cell_index(i + 1, j) : -1;
            f.axis = 0;
            f.ghost = -1;
            f.tag = BoundaryTag::interior;
            const int id = static_cast<int>(m.faces.size());
            if (f.left < 0) {
                f.ghost = add_ghost(id, m.cell_cx[f.right], m.cell_cy[f.right],
                                    node_x[na], node_y[na], node_x[nb], node_y[nb]);
                f.tag = BoundaryTag::slip_wall;
            } else if (f.right < 0) {
                f.ghost = add_ghost(id, m.cell_cx[f.left], m.cell_cy[f.left],
                                    node_x[na], node_y[na], node_x[nb], node_y[nb]);
                f.tag = BoundaryTag::slip_wall;
            }
            m.faces.push_back(f);
        }
    }

    // j-faces: between nodes (i, j) and (i+1, j); normal towards +y.
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int na = m.node_index(i, j), nb = m.node_index(i + 1, j);
            StructuredQuadMesh::Face f;
            const double dx = node_x[nb] - node_x[na], dy = node_y[nb] - node_y[na];
            f.length = std::sqrt(dx * dx + dy * dy);
            if (!(f.length > 0.0))
                throw SolverError(ErrorCode::mesh_error, "build_structured_mesh: zero-length face");
            f.nx_n = -dy / f.length;
            f.ny_n = dx / f.length;
            f.mid_x = 0.5 * (node_x[na] + node_x[nb]);
            f.mid_y = 0.5 * (node_y[na] + node_y[nb]);
            f.left = (j > 0) ? m.cell_index(i, j - 1) : -1;
            f.right = (j < ny) ? m.cell_index(i, j) : -1;
            f.upwind_left = (j > 1) ? m.cell_index(i, j - 2) : -1;
            f.upwind_right = (j < ny - 1) ? m.cell_index(i, j + 1) : -1;
            f.axis = 1;
            f.ghost = -1;
            f.tag = BoundaryTag::interior;
            const int id = static_cast<int>(m.faces.size());
            if (f.left < 0) {
                f.ghost = add_ghost(id, m.cell_cx[f.right], m.cell_cy[f.right],
                                    node_x[na], node_y[na], node_x[nb], node_y[nb]);
                f.tag = BoundaryTag::slip_wall;
            } else if (f.right < 0) {
                f.ghost = add_ghost(id, m.cell_cx[f.left], m.cell_cy[f.left],
                                    node_x[na], node_y[na], node_x[nb], node_y[nb]);
                f.tag = BoundaryTag::slip_wall;
            }
            m.faces.push_back(f);
        }
    }

    const int n_ifaces = (nx + 1) * ny;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int c = m.cell_index(i, j);
            m.cell_faces[c] = {j * (nx + 1) + i,            // W
                               j * (nx + 1) + i + 1,        // E
                               n_ifaces + j * nx + i,       // S
                               n_ifaces + (j + 1) * nx + i}; // N
        }
    }

    for (int c = 0; c < n_cells; ++c) {
        double perim = 0.0;
        for (int k = 0; k < 4; ++k) perim += m.faces[m.cell_faces[c][k]].length;
        m.cell_d[c] = 4.0 * m.cell_area[c] / perim;
    }

    return m;
}

// Axis-aligned box [0, Lx] x [0, Ly], uniform spacing, slip walls all around.
inline StructuredQuadMesh build_box_mesh(int nx, int ny, double Lx, double Ly) {
    if (!(Lx > 0.0) || !(Ly > 0.0))
        throw SolverError(ErrorCode::mesh_error, "build_box_mesh: domain lengths must be > 0");
    if (nx < 1 || ny < 1)
        throw SolverError(ErrorCode::mesh_error, "build_box_mesh: nx, ny must be >= 1");
    std::vector<double> xs(static_cast<std::size_t>(nx + 1) * (ny + 1));
    std::vector<double> ys(xs.size());
    for (int j = 0; j <= ny; ++j) {
        const double y = Ly * static_cast<double>(j) / ny;
        for (int i = 0; i <= nx; ++i) {
            xs[static_cast<std::size_t>(j) * (nx + 1) + i] = Lx * static_cast<double>(i) / nx;
            ys[static_cast<std::size_t>(j) * (nx + 1) + i] = y;
        }
    }
    return build_structured_mesh(nx, ny, xs, ys);
}

/*--- Converging-diverging channel. Bottom wall at y = 0, top wall at

          h(x) = h_throat + (h_inlet - h_throat) * (1 + cos(2*pi*x/L)) / 2,

      so the section narrows from h_inlet at x = 0 to h_throat at x = L/2 and
      opens up again, mirror-symmetric about the throat. Columns of nodes are
      spaced evenly in x and stretched linearly in y. Left boundary is tagged
      as inlet, right as outlet, the walls as slip. ---*/

inline StructuredQuadMesh build_nozzle_mesh(int nx, int ny, double L,
                                            double h_inlet, double h_throat) {
    if (!(L > 0.0))
        throw SolverError(ErrorCode::mesh_error, "build_nozzle_mesh: length must be > 0");
    if (!(h_throat > 0.0))
        throw SolverError(ErrorCode::mesh_error, "build_nozzle_mesh: degenerate throat");
    if (!(h_inlet >= h_throat))
        throw SolverError(ErrorCode::mesh_error, "build_nozzle_mesh: h_inlet < h_throat");
    if (nx < 1 || ny < 1)
        throw SolverError(ErrorCode::mesh_error, "build_nozzle_mesh: nx, ny must be >= 1");

    std::vector<double> xs(static_cast<std::size_t>(nx + 1) * (ny + 1));
    std::vector<double> ys(xs.size());
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int i = 0; i <= nx; ++i) {
        const double x = L * static_cast<double>(i) / nx;
        const double h = h_throat + (h_inlet - h_throat) * 0.5 * (1.0 + std::cos(two_pi * x / L));
        for (int j = 0; j <= ny; ++j) {
            xs[static_cast<std::size_t>(j) * (nx + 1) + i] = x;
            ys[static_cast<std::size_t>(j) * (nx + 1) + i] = h * static_cast<double>(j) / ny;
        }
    }
    auto m = build_structured_mesh(nx, ny, xs, ys);
    for (auto& f : m.faces) {
        if (f.ghost < 0) continue;
        if (f.axis == 0) f.tag = (f.left < 0) ? BoundaryTag::inlet : BoundaryTag::outlet;
    }
    return m;
}

} // namespace tpfv
