#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tpfv/cases.hpp"
#include "tpfv/errors.hpp"
#include "tpfv/mesh.hpp"
#include "tpfv/metrics.hpp"
#include "tpfv/state.hpp"

namespace tpfv {

/*--- Plain-text structured-grid snapshots.

          tpfv-grid 1
          <nx> <ny>
          NODES
          <x> <y>             one node per line, (nx+1)*(ny+1) lines, i fastest
          FIELD <name>
          <value>             one cell per line, nx*ny lines, row-major from (0,0)
          FIELD <name>
          ...

      All numbers carry 17 significant digits, so reading a snapshot back
      reproduces every double bit for bit. Text was chosen over a binary
      container to keep snapshots diffable in tests. ---*/

namespace detail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw SolverError(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    out.flush();
    if (!out) throw SolverError(ErrorCode::io_error, "short write to '" + path + "'");
}

} // namespace detail

struct Snapshot {
    int nx = 0, ny = 0;
    std::vector<double> node_x, node_y;
    std::vector<std::string> names;
    std::vector<std::vector<double>> fields;

    const std::vector<double>& field(const std::string& name) const {
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] == name) return fields[k];
        throw SolverError(ErrorCode::io_error, "snapshot has no field '" + name + "'");
    }
};

inline void write_snapshot(const StructuredQuadMesh& mesh,
                           const std::vector<std::pair<std::string, std::vector<double>>>& fields,
                           const std::string& path) {
    std::string body;
    body += "tpfv-grid 1\n";
    body += std::to_string(mesh.nx) + " " + std::to_string(mesh.ny) + "\n";
    body += "NODES\n";
    for (std::size_t n = 0; n < mesh.node_x.size(); ++n)
        body += detail::g17(mesh.node_x[n]) + " " + detail::g17(mesh.node_y[n]) + "\n";
    for (const auto& [name, values] : fields) {
        if (static_cast<int>(values.size()) != mesh.cell_count())
            throw SolverError(ErrorCode::io_error,
                              "write_snapshot: field '" + name + "' has the wrong size");
        body += "FIELD " + name + "\n";
        for (double v : values) body += detail::g17(v) + "\n";
    }
    detail::write_text_file(path, body);
}

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SolverError(ErrorCode::io_error, "cannot open '" + path + "'");
    auto fail = [&](const std::string& msg) -> void {
        throw SolverError(ErrorCode::io_error, "'" + path + "': " + msg);
    };

    Snapshot s;
    std::string line;
    if (!std::getline(in, line) || line != "tpfv-grid 1") fail("not a tpfv-grid 1 snapshot");
    if (!std::getline(in, line)) fail("missing dimensions line");
    {
        std::istringstream dims(line);
        if (!(dims >> s.nx >> s.ny) || s.nx < 1 || s.ny < 1) fail("bad dimensions line");
    }
    if (!std::getline(in, line) || line != "NODES") fail("missing NODES block");
    const std::size_t n_nodes =
        static_cast<std::size_t>(s.nx + 1) * static_cast<std::size_t>(s.ny + 1);
    s.node_x.resize(n_nodes);
    s.node_y.resize(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        if (!std::getline(in, line)) fail("truncated NODES block");
        std::istringstream ls(line);
        if (!(ls >> s.node_x[n] >> s.node_y[n])) fail("bad node line");
    }
    const std::size_t n_cells = static_cast<std::size_t>(s.nx) * static_cast<std::size_t>(s.ny);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("FIELD ", 0) != 0) fail("expected a FIELD header, got '" + line + "'");
        s.names.push_back(line.substr(6));
        auto& vals = s.fields.emplace_back(n_cells);
        for (std::size_t c = 0; c < n_cells; ++c) {
            if (!std::getline(in, line)) fail("truncated field '" + s.names.back() + "'");
            std::istringstream ls(line);
            if (!(ls >> vals[c])) fail("bad value line in field '" + s.names.back() + "'");
        }
    }
    return s;
}

/*--- The standard snapshot of a solved field: both phase states, mixture
      pressure, and the density-gradient shading. ---*/

inline std::vector<std::pair<std::string, std::vector<double>>>
snapshot_fields(const StructuredQuadMesh& mesh, const std::vector<PrimitiveState>& w) {
    if (static_cast<int>(w.size()) != mesh.cell_count())
        throw SolverError(ErrorCode::io_error, "snapshot_fields: field size mismatch");
    const std::size_t n = w.size();
    std::vector<std::pair<std::string, std::vector<double>>> out;
    const char* names[8] = {"alpha1", "rho1", "rho2", "u", "v", "p1", "p2", "p"};
    for (const char* name : names) out.emplace_back(name, std::vector<double>(n));
    std::vector<double> rho(n);
    for (std::size_t c = 0; c < n; ++c) {
        out[0].second[c] = w[c].alpha1;
        out[1].second[c] = w[c].rho1;
        out[2].second[c] = w[c].rho2;
        out[3].second[c] = w[c].u;
        out[4].second[c] = w[c].v;
        out[5].second[c] = w[c].p1;
        out[6].second[c] = w[c].p2;
        out[7].second[c] = w[c].p();
        rho[c] = w[c].rho();
    }
    out.emplace_back("schlieren", numerical_schlieren(mesh, rho));
    return out;
}

/*--- Time series as two-column CSV with a "t,<label>" header. ---*/

inline void write_series(const TimeSeries& s, const std::string& path) {
    std::string body = "t," + s.label + "\n";
    for (std::size_t k = 0; k < s.size(); ++k)
        body += detail::g17(s.t[k]) + "," + detail::g17(s.v[k]) + "\n";
    detail::write_text_file(path, body);
}

inline TimeSeries read_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SolverError(ErrorCode::io_error, "cannot open '" + path + "'");
    TimeSeries s;
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,", 0) != 0)
        throw SolverError(ErrorCode::io_error, "'" + path + "': missing t,<label> header");
    s.label = line.substr(2);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw SolverError(ErrorCode::io_error, "'" + path + "': bad series row");
        try {
            s.append(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const SolverError&) {
            throw;
        } catch (const std::exception&) {
            throw SolverError(ErrorCode::io_error, "'" + path + "': bad series row");
        }
    }
    return s;
}

} // namespace tpfv
