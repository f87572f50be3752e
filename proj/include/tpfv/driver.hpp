#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "tpfv/cases.hpp"
#include "tpfv/config.hpp"
#include "tpfv/errors.hpp"
#include "tpfv/evolution.hpp"
#include "tpfv/grid_io.hpp"
#include "tpfv/metrics.hpp"

namespace tpfv {

/*--- Time-loop driver. One call owns a whole run: resolve the config, echo
      the effective configuration into the output directory (so the run is
      reproducible from its artifacts alone), march with CFL-controlled
      steps truncating the last one to land on the end time exactly, write
      snapshots and the case's diagnostic series on their cadences, and
      finish with a run summary holding the step count, wall time, and the
      guarded-path event counters. The driver itself is single-threaded;
      a worker count above one only parallelizes the solver's interior
      sweeps, which never changes any result. ---*/

struct RunSummary {
    long steps = 0;
    double final_time = 0.0;
    double wall_seconds = 0.0;
    int snapshots = 0;
    std::uint64_t alpha_clamps = 0;
    std::uint64_t first_order_fallbacks = 0;
    std::uint64_t collinear_stencils = 0;
    std::uint64_t sstar_fallbacks = 0;
    std::uint64_t sonic_rarefactions = 0;
    std::uint64_t relax_calls = 0;
    std::uint64_t relax_iterations = 0;
};

namespace detail {

inline void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw SolverError(ErrorCode::io_error,
                          "cannot create output directory '" + dir + "': " + ec.message());
}

inline std::string snapshot_name(const std::string& dir, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snapshot_%04d.dat", index);
    return dir + "/" + buf;
}

/*--- Per-case diagnostic probes appended on the series cadence. ---*/

class SeriesRecorder {
public:
    SeriesRecorder(const CaseSetup& cs, const StructuredQuadMesh& mesh) : case_(cs.name) {
        if (case_ == "nozzle") {
            add("pressure_fluctuation", "-");
        } else if (case_ == "sloshing") {
            add("left_wall_height", "m");
        } else if (case_ == "dam_break") {
            add("front_x", "m");
            add("left_wall_height", "m");
        } else if (case_ == "shock_bubble") {
            add("upstream_x", "m");
            add("downstream_x", "m");
            add("jet_x", "m");
            add("helium_mass", "kg");
            // pressure probes ahead of the incident shock, near the top wall
            const int jp = std::max(mesh.ny - 2, 0);
            probe_a_ = nearest_cell(mesh, 0.245, jp);
            probe_b_ = nearest_cell(mesh, 0.205, jp);
            add("p_probe_a", "Pa");
            add("p_probe_b", "Pa");
        }
        p_ref_ = cs.bv.outlet_p;
    }

    void sample(double t, FlowSolver& solver) {
        if (series_.empty()) return;
        if (!series_[0].t.empty() && !(t > series_[0].t.back())) return;
        const auto w = solver.primitives();
        const auto& mesh = solver.mesh();
        if (case_ == "nozzle") {
            std::vector<double> p(w.size());
            for (std::size_t c = 0; c < w.size(); ++c) p[c] = w[c].p();
            series_[0].append(t, pressure_fluctuation(p, p_ref_));
        } else if (case_ == "sloshing" || case_ == "dam_break") {
            std::vector<double> water(w.size());
            for (std::size_t c = 0; c < w.size(); ++c) water[c] = 1.0 - w[c].alpha1;
            const auto contour = interface_contour(mesh, water);
            if (case_ == "sloshing") {
                if (contour.left_valid) series_[0].append(t, contour.left_wall_height);
            } else {
                if (contour.front_valid) series_[0].append(t, contour.front_x);
                if (contour.left_valid) series_[1].append(t, contour.left_wall_height);
            }
        } else if (case_ == "shock_bubble") {
            std::vector<double> he(w.size());
            for (std::size_t c = 0; c < w.size(); ++c) he[c] = 1.0 - w[c].alpha1;
            try {
                const auto bp = bubble_points(mesh, he);
                series_[0].append(t, bp.upstream_x);
                series_[1].append(t, bp.downstream_x);
                series_[2].append(t, bp.jet_x);
            } catch (const SolverError&) {
                // bubble fully mixed below the threshold: skip the sample
            }
            series_[3].append(t, solver.conserved_totals(solver.field())[1]);
            series_[4].append(t, w[static_cast<std::size_t>(probe_a_)].p());
            series_[5].append(t, w[static_cast<std::size_t>(probe_b_)].p());
        }
    }

    void write(const std::string& dir) const {
        for (const auto& s : series_)
            if (!s.t.empty()) write_series(s, dir + "/" + s.label + ".csv");
    }

private:
    void add(const std::string& label, const std::string& units) {
        TimeSeries s;
        s.label = label;
        s.units = units;
        series_.push_back(std::move(s));
    }

    static int nearest_cell(const StructuredQuadMesh& mesh, double x, int j) {
        int best = mesh.cell_index(0, j);
        double dist = std::abs(mesh.cell_cx[static_cast<std::size_t>(best)] - x);
        for (int i = 1; i < mesh.nx; ++i) {
            const int c = mesh.cell_index(i, j);
            const double d = std::abs(mesh.cell_cx[static_cast<std::size_t>(c)] - x);
            if (d < dist) {
                dist = d;
                best = c;
            }
        }
        return best;
    }

    std::string case_;
    std::vector<TimeSeries> series_;
    double p_ref_ = 1e5;
    int probe_a_ = 0, probe_b_ = 0;
};

inline void fill_counters(RunSummary& sum, RunStats& stats) {
    sum.alpha_clamps = stats.alpha_clamps.load();
    sum.first_order_fallbacks = stats.first_order_fallbacks.load();
    sum.collinear_stencils = stats.collinear_stencils.load();
    sum.sstar_fallbacks = stats.sstar_fallbacks.load();
    sum.sonic_rarefactions = stats.sonic_rarefactions.load();
    sum.relax_calls = stats.relax_calls.load();
    sum.relax_iterations = stats.relax_iterations.load();
}

inline void write_run_summary(const std::string& dir, const RunSummary& sum,
                              const std::string& abort_message) {
    std::string body;
    body += "status = " + std::string(abort_message.empty() ? "ok" : "aborted") + "\n";
    if (!abort_message.empty()) body += "error = " + abort_message + "\n";
    body += "steps = " + std::to_string(sum.steps) + "\n";
    body += "final_time = " + g17(sum.final_time) + "\n";
    body += "wall_seconds = " + g17(sum.wall_seconds) + "\n";
    body += "snapshots = " + std::to_string(sum.snapshots) + "\n";
    body += "alpha_clamps = " + std::to_string(sum.alpha_clamps) + "\n";
    body += "first_order_fallbacks = " + std::to_string(sum.first_order_fallbacks) + "\n";
    body += "collinear_stencils = " + std::to_string(sum.collinear_stencils) + "\n";
    body += "sstar_fallbacks = " + std::to_string(sum.sstar_fallbacks) + "\n";
    body += "sonic_rarefactions = " + std::to_string(sum.sonic_rarefactions) + "\n";
    body += "relax_calls = " + std::to_string(sum.relax_calls) + "\n";
    body += "relax_iterations = " + std::to_string(sum.relax_iterations) + "\n";
    write_text_file(dir + "/summary.txt", body);
}

} // namespace detail

/*--- Execute one configured run. The RunConfig is resolved in place; the
      returned summary is also written to <output_dir>/summary.txt. Solver
      failures are written to the summary and rethrown, so a caller can map
      them onto its exit status while the artifacts stay on disk. ---*/

inline RunSummary run_case(RunConfig& rc, int threads = 1) {
    const auto wall_start = std::chrono::steady_clock::now();

    CaseSetup cs = resolve(rc);
    cs.scheme.threads = std::max(1, threads);
    detail::ensure_directory(rc.output_dir);
    detail::write_text_file(rc.output_dir + "/effective.cfg", format_config(rc));

    const auto mesh = cs.make_mesh(cs.nx, cs.ny);
    FlowSolver solver(mesh, cs.eos1, cs.eos2, cs.scheme, cs.bv);
    solver.set_initial(sample_initial(cs, mesh));

    RunSummary sum;
    detail::SeriesRecorder recorder(cs, mesh);
    recorder.sample(0.0, solver);
    write_snapshot(mesh, snapshot_fields(mesh, solver.primitives()),
                   detail::snapshot_name(rc.output_dir, 0));
    sum.snapshots = 1;

    double t = 0.0;
    double next_snapshot = cs.snapshot_interval > 0.0 ? cs.snapshot_interval : 0.0;
    double next_series = cs.series_interval > 0.0 ? cs.series_interval : 0.0;
    double last_snapshot_t = 0.0;
    std::string abort_message;

    try {
        while (t < cs.t_end) {
            double dt = solver.stable_time_step();
            if (!(dt > 0.0) || !std::isfinite(dt))
                throw SolverError(ErrorCode::solver_abort, "nonpositive stable time step");
            bool last = false;
            if (t + dt >= cs.t_end) {
                dt = cs.t_end - t;
                last = true;
            }
            solver.advance(dt);
            t = last ? cs.t_end : t + dt;
            ++sum.steps;

            if (cs.series_interval <= 0.0 || t >= next_series) {
                recorder.sample(t, solver);
                if (cs.series_interval > 0.0)
                    while (next_series <= t) next_series += cs.series_interval;
            }
            if (cs.snapshot_interval > 0.0 && t >= next_snapshot) {
                write_snapshot(mesh, snapshot_fields(mesh, solver.primitives()),
                               detail::snapshot_name(rc.output_dir, sum.snapshots));
                ++sum.snapshots;
                last_snapshot_t = t;
                while (next_snapshot <= t) next_snapshot += cs.snapshot_interval;
            }
        }
    } catch (const SolverError& err) {
        abort_message = err.what();
        sum.final_time = t;
        sum.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
        detail::fill_counters(sum, solver.stats());
        detail::write_run_summary(rc.output_dir, sum, abort_message);
        recorder.write(rc.output_dir);
        throw;
    }

    if (cs.t_end > 0.0) {
        recorder.sample(cs.t_end, solver);
        if (last_snapshot_t != cs.t_end || sum.snapshots == 1) {
            write_snapshot(mesh, snapshot_fields(mesh, solver.primitives()),
                           detail::snapshot_name(rc.output_dir, sum.snapshots));
            ++sum.snapshots;
        }
    }
    recorder.write(rc.output_dir);
    sum.final_time = t;
    sum.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    detail::fill_counters(sum, solver.stats());
    detail::write_run_summary(rc.output_dir, sum, "");
    return sum;
}

} // namespace tpfv
