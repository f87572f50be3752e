// Command line front end: `run` executes one configured case, `sweep` runs
// the nozzle across a list of Mach numbers and fits the pressure-fluctuation
// slope, `check` runs the structural self-checks. Exit codes: 0 success,
// 1 failed self-check, 2 configuration error, 3 solver abort, 4 I/O error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpfv/checks.hpp"
#include "tpfv/config.hpp"
#include "tpfv/driver.hpp"
#include "tpfv/grid_io.hpp"
#include "tpfv/metrics.hpp"

namespace {

using namespace tpfv;

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::config_error: return 2;
    case ErrorCode::io_error: return 4;
    default: return 3;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SolverError(ErrorCode::io_error, "cannot open '" + path + "'");
    std::ostringstream body;
    body << in.rdbuf();
    if (in.bad()) throw SolverError(ErrorCode::io_error, "cannot read '" + path + "'");
    return body.str();
}

struct Overrides {
    std::string output_dir;
    std::string correction; // "", "on", "off"
    int threads = 0;        // 0: TPFV_THREADS or 1
    int order = 0;          // 0: keep the config
};

void apply_overrides(RunConfig& rc, const Overrides& ov) {
    if (!ov.output_dir.empty()) rc.output_dir = ov.output_dir;
    if (ov.order != 0) rc.order = ov.order;
    if (!ov.correction.empty()) rc.correction = ov.correction == "on" ? 1 : 0;
}

int resolve_threads(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    const char* env = std::getenv("TPFV_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1)
        throw SolverError(ErrorCode::config_error,
                          "TPFV_THREADS must be a positive integer, got '" + std::string(env) +
                              "'");
    return static_cast<int>(n);
}

int do_run(const std::string& cfg_path, const Overrides& ov) {
    RunConfig rc = parse_config(read_file(cfg_path));
    apply_overrides(rc, ov);
    const int threads = resolve_threads(ov.threads);
    const RunSummary sum = run_case(rc, threads);
    std::printf("run: case=%s nx=%d ny=%d order=%d correction=%s threads=%d\n",
                rc.case_name.c_str(), rc.nx, rc.ny, rc.order,
                rc.correction != 0 ? "on" : "off", threads);
    std::printf("run: steps=%ld final_time=%.17g wall_seconds=%.3f\n", sum.steps,
                sum.final_time, sum.wall_seconds);
    std::printf("run: output_dir=%s\n", rc.output_dir.c_str());
    return 0;
}

int do_sweep(const std::string& cfg_path, const std::vector<double>& machs,
             const Overrides& ov) {
    const std::string text = read_file(cfg_path);
    {
        RunConfig probe = parse_config(text);
        if (probe.case_name != "nozzle")
            throw SolverError(ErrorCode::config_error,
                              "sweep requires the nozzle case, config has '" + probe.case_name +
                                  "'");
    }
    for (std::size_t a = 0; a < machs.size(); ++a) {
        if (!(machs[a] > 0.0 && machs[a] < 0.3))
            throw SolverError(ErrorCode::config_error, "sweep mach values must lie in (0, 0.3)");
        for (std::size_t b = a + 1; b < machs.size(); ++b)
            if (machs[a] == machs[b])
                throw SolverError(ErrorCode::config_error, "sweep mach values must be distinct");
    }

    const int threads = resolve_threads(ov.threads);
    std::string base_dir;
    std::vector<ScalePoint> points;
    for (double mach : machs) {
        RunConfig rc = parse_config(text);
        apply_overrides(rc, ov);
        rc.mach = mach;
        if (base_dir.empty()) base_dir = rc.output_dir;
        char sub[48];
        std::snprintf(sub, sizeof(sub), "/mach_%g", mach);
        rc.output_dir = base_dir + sub;
        (void)run_case(rc, threads);
        const TimeSeries s = read_series(rc.output_dir + "/pressure_fluctuation.csv");
        const double fluctuation = s.v.back();
        points.push_back({mach, fluctuation});
        std::printf("sweep: mach=%g fluctuation=%.6e dir=%s\n", mach, fluctuation,
                    rc.output_dir.c_str());
    }

    std::string table = "mach,fluctuation\n";
    for (const auto& pt : points)
        table += detail::g17(pt.mach) + "," + detail::g17(pt.fluctuation) + "\n";
    detail::write_text_file(base_dir + "/scaling.csv", table);

    if (points.size() >= 3)
        std::printf("sweep: slope=%.4f\n", scaling_slope(points));
    else
        std::printf("sweep: slope needs at least 3 Mach numbers, skipped\n");
    return 0;
}

int do_check() {
    bool all_pass = true;
    for (const CheckResult& r : run_structural_checks()) {
        std::printf("%s %s: %s\n", r.pass ? "ok  " : "FAIL", r.name.c_str(), r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-phase finite volume flow driver"};
    app.require_subcommand(1);

    std::string cfg_path;
    Overrides ov;
    std::vector<double> machs;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", cfg_path, "configuration file")->required();
        cmd->add_option("--output-dir", ov.output_dir, "override the output directory");
        cmd->add_option("--threads", ov.threads, "worker count (default TPFV_THREADS, else 1)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--order", ov.order, "override the spatial order")
            ->check(CLI::IsMember({1, 2}));
        cmd->add_option("--correction", ov.correction, "low-Mach velocity correction")
            ->check(CLI::IsMember({"on", "off"}));
    };

    CLI::App* run_cmd = app.add_subcommand("run", "execute one configured case");
    add_common(run_cmd);
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "run the nozzle across Mach numbers and fit the fluctuation scaling");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--mach", machs, "Mach numbers (comma separated)")
        ->required()
        ->delimiter(',');
    CLI::App* check_cmd = app.add_subcommand("check", "run the structural self-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(cfg_path, ov);
        if (sweep_cmd->parsed()) return do_sweep(cfg_path, machs, ov);
        if (check_cmd->parsed()) return do_check();
    } catch (const SolverError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return exit_code_for(err.code());
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    }
    return 0;
}
