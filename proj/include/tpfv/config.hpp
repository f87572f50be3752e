#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "tpfv/cases.hpp"
#include "tpfv/errors.hpp"

namespace tpfv {

/*--- Run configuration, the parsed form of a `key = value` file. A zero or
      negative sentinel means "use the case default"; resolve() folds the
      overrides into a CaseSetup and reports the effective values. ---*/

struct RunConfig {
    std::string case_name;          // required
    double mach = 0.01;             // nozzle inflow Mach number
    bool hydrostatic = false;       // resting water starts with its head
    int nx = 0, ny = 0;             // 0: case default
    int order = 0;                  // 0: case default, else 1 or 2
    int correction = -1;            // -1: case default, else 0 or 1
    std::string limiter;            // "": case default, "none", "overbee"
    double cfl = 0.0;               // 0: case default, else in (0, 1]
    double end_time = -1.0;         // < 0: case default
    double snapshot_interval = -1.0;
    double series_interval = -1.0;
    double omega = 0.5;
    bool has_gravity_x = false, has_gravity_y = false;
    double gravity_x = 0.0, gravity_y = 0.0;
    std::string output_dir = "out";
    long seed = 0; // reserved for future stochastic tooling, unused
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] inline void config_fail(int line, const std::string& msg) {
    throw SolverError(ErrorCode::config_error,
                      "config line " + std::to_string(line) + ": " + msg);
}

inline double parse_number(const std::string& v, int line) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        config_fail(line, "expected a number, got '" + v + "'");
    }
    if (used != v.size()) config_fail(line, "trailing characters after number '" + v + "'");
    if (!std::isfinite(x)) config_fail(line, "value must be finite");
    return x;
}

inline int parse_int(const std::string& v, int line) {
    const double x = parse_number(v, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) config_fail(line, "expected an integer, got '" + v + "'");
    return i;
}

inline bool parse_switch(const std::string& v, int line) {
    const std::string s = lower(v);
    if (s == "on" || s == "true" || s == "1") return true;
    if (s == "off" || s == "false" || s == "0") return false;
    config_fail(line, "expected on/off, got '" + v + "'");
}

} // namespace detail

/*--- Parse a configuration text. Lines hold `key = value` pairs; '#' starts
      a comment; keys are case-insensitive; unknown or repeated keys, values
      outside their documented ranges, and a missing case are rejected with
      the offending line number. ---*/

inline RunConfig parse_config(const std::string& text) {
    using detail::config_fail;
    RunConfig rc;
    std::set<std::string> seen;
    bool has_case = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) config_fail(line_no, "expected 'key = value'");
        const std::string key = detail::lower(detail::trim(line.substr(0, eq)));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) config_fail(line_no, "empty key");
        if (val.empty()) config_fail(line_no, "empty value for '" + key + "'");
        if (!seen.insert(key).second) config_fail(line_no, "key '" + key + "' set twice");

        if (key == "case") {
            const std::string c = detail::lower(val);
            if (c != "nozzle" && c != "dam_break" && c != "sloshing" &&
                c != "shock_bubble" && c != "shock_tube")
                config_fail(line_no, "unknown case '" + val + "'");
            rc.case_name = c;
            has_case = true;
        } else if (key == "mach") {
            rc.mach = detail::parse_number(val, line_no);
            if (!(rc.mach > 0.0 && rc.mach < 0.3))
                config_fail(line_no, "mach must lie in (0, 0.3)");
        } else if (key == "hydrostatic") {
            rc.hydrostatic = detail::parse_switch(val, line_no);
        } else if (key == "nx") {
            rc.nx = detail::parse_int(val, line_no);
            if (rc.nx < 1) config_fail(line_no, "nx must be >= 1");
        } else if (key == "ny") {
            rc.ny = detail::parse_int(val, line_no);
            if (rc.ny < 1) config_fail(line_no, "ny must be >= 1");
        } else if (key == "order") {
            rc.order = detail::parse_int(val, line_no);
            if (rc.order != 1 && rc.order != 2) config_fail(line_no, "order must be 1 or 2");
        } else if (key == "correction") {
            rc.correction = detail::parse_switch(val, line_no) ? 1 : 0;
        } else if (key == "limiter") {
            const std::string l = detail::lower(val);
            if (l != "none" && l != "overbee")
                config_fail(line_no, "limiter must be none or overbee");
            rc.limiter = l;
        } else if (key == "cfl") {
            rc.cfl = detail::parse_number(val, line_no);
            if (!(rc.cfl > 0.0 && rc.cfl <= 1.0))
                config_fail(line_no, "cfl must lie in (0, 1] (max 1.0)");
        } else if (key == "end_time") {
            rc.end_time = detail::parse_number(val, line_no);
            if (rc.end_time < 0.0) config_fail(line_no, "end_time must be >= 0");
        } else if (key == "snapshot_interval") {
            rc.snapshot_interval = detail::parse_number(val, line_no);
            if (rc.snapshot_interval < 0.0)
                config_fail(line_no, "snapshot_interval must be >= 0");
        } else if (key == "series_interval") {
            rc.series_interval = detail::parse_number(val, line_no);
            if (rc.series_interval < 0.0) config_fail(line_no, "series_interval must be >= 0");
        } else if (key == "omega") {
            rc.omega = detail::parse_number(val, line_no);
            if (!(rc.omega >= 0.0 && rc.omega <= 1.0))
                config_fail(line_no, "omega must lie in [0, 1]");
        } else if (key == "gravity_x") {
            rc.gravity_x = detail::parse_number(val, line_no);
            rc.has_gravity_x = true;
        } else if (key == "gravity_y") {
            rc.gravity_y = detail::parse_number(val, line_no);
            rc.has_gravity_y = true;
        } else if (key == "output_dir") {
            rc.output_dir = val;
        } else if (key == "seed") {
            rc.seed = static_cast<long>(detail::parse_number(val, line_no));
        } else {
            config_fail(line_no, "unknown key '" + key + "'");
        }
    }
    if (!has_case)
        throw SolverError(ErrorCode::config_error, "config: missing required key 'case'");
    return rc;
}

/*--- Fold the overrides into the named case. The returned CaseSetup holds
      the effective values of every knob; the RunConfig passed in is updated
      in place to mirror them, so writing it back yields a config that
      reproduces the run without consulting any default. ---*/

inline CaseSetup resolve(RunConfig& rc) {
    CaseSetup cs = make_case(rc.case_name, rc.mach, rc.hydrostatic);
    if (rc.nx > 0) cs.nx = rc.nx;
    if (rc.ny > 0) cs.ny = rc.ny;
    if (rc.order != 0) cs.scheme.order = rc.order;
    if (rc.correction >= 0) cs.scheme.correction = rc.correction != 0;
    if (!rc.limiter.empty()) cs.scheme.overbee = rc.limiter == "overbee";
    if (rc.cfl > 0.0) cs.scheme.cfl = rc.cfl;
    if (rc.end_time >= 0.0) cs.t_end = rc.end_time;
    if (rc.snapshot_interval >= 0.0) cs.snapshot_interval = rc.snapshot_interval;
    if (rc.series_interval >= 0.0) cs.series_interval = rc.series_interval;
    cs.scheme.omega = rc.omega;
    if (rc.has_gravity_x) cs.scheme.gravity_x = rc.gravity_x;
    if (rc.has_gravity_y) cs.scheme.gravity_y = rc.gravity_y;

    rc.nx = cs.nx;
    rc.ny = cs.ny;
    rc.order = cs.scheme.order;
    rc.correction = cs.scheme.correction ? 1 : 0;
    rc.limiter = cs.scheme.overbee ? "overbee" : "none";
    rc.cfl = cs.scheme.cfl;
    rc.end_time = cs.t_end;
    rc.snapshot_interval = cs.snapshot_interval;
    rc.series_interval = cs.series_interval;
    rc.gravity_x = cs.scheme.gravity_x;
    rc.gravity_y = cs.scheme.gravity_y;
    rc.has_gravity_x = rc.has_gravity_y = true;
    return cs;
}

/*--- Serialize a resolved config. Doubles are written with 17 significant
      digits so a round trip through parse_config is value-exact. ---*/

inline std::string format_config(const RunConfig& rc) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string out;
    out += "case = " + rc.case_name + "\n";
    out += "mach = " + num(rc.mach) + "\n";
    out += "hydrostatic = " + std::string(rc.hydrostatic ? "on" : "off") + "\n";
    out += "nx = " + std::to_string(rc.nx) + "\n";
    out += "ny = " + std::to_string(rc.ny) + "\n";
    out += "order = " + std::to_string(rc.order) + "\n";
    out += "correction = " + std::string(rc.correction != 0 ? "on" : "off") + "\n";
    out += "limiter = " + (rc.limiter.empty() ? std::string("none") : rc.limiter) + "\n";
    out += "cfl = " + num(rc.cfl) + "\n";
    out += "end_time = " + num(rc.end_time) + "\n";
    out += "snapshot_interval = " + num(rc.snapshot_interval) + "\n";
    out += "series_interval = " + num(rc.series_interval) + "\n";
    out += "omega = " + num(rc.omega) + "\n";
    out += "gravity_x = " + num(rc.gravity_x) + "\n";
    out += "gravity_y = " + num(rc.gravity_y) + "\n";
    out += "output_dir = " + rc.output_dir + "\n";
    out += "seed = " + std::to_string(rc.seed) + "\n";
    return out;
}

} // namespace tpfv
