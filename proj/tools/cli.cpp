#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace pipir::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, const std::string& what) {
    const std::string_view t = trim(text);
    std::string_view digits = t;
    if (!digits.empty() && digits.front() == '+') {
        digits.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() ||
        !std::isfinite(v)) {
        throw ConfigurationError("malformed number for " + what + ": '" + std::string(t) + "'");
    }
    return v;
}

long parse_integer(std::string_view text, const std::string& what) {
    const std::string_view t = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigurationError("malformed integer for " + what + ": '" + std::string(t) + "'");
    }
    return v;
}

int checked_resolution(long v, const std::string& what) {
    if (v < 2 || v > 8192) {
        throw ConfigurationError(what + " must be in [2, 8192], got " + std::to_string(v));
    }
    return static_cast<int>(v);
}

unsigned checked_threads(long v) {
    if (v < 0 || v > 1024) {
        throw ConfigurationError("threads must be in [0, 1024], got " + std::to_string(v));
    }
    return static_cast<unsigned>(v);
}

double checked_tolerance(double v, const std::string& what) {
    if (!(v > 0.0)) {
        throw ConfigurationError(what + " must be positive");
    }
    return v;
}

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double angle_out(double rad, bool degrees) { return degrees ? rad * kDegPerRad : rad; }
double angle_in(double v, bool degrees) { return degrees ? v / kDegPerRad : v; }

std::string join_numbers(std::initializer_list<double> values) {
    std::string s;
    for (double v : values) {
        if (!s.empty()) {
            s += ',';
        }
        s += format_number(v);
    }
    return s;
}

void write_params(std::ostream& os, const Config& cfg) {
    os << "# preset=" << preset_name(cfg.preset) << '\n';
    os << "# d1=" << format_number(cfg.params.d1) << '\n';
    os << "# d2=" << format_number(cfg.params.d2) << '\n';
    os << "# d3=" << format_number(cfg.params.d3) << '\n';
    os << "# d4=" << format_number(cfg.params.d4) << '\n';
    os << "# l=" << format_number(cfg.params.l) << '\n';
}

Pose pose_from_text(Mode mode, const std::string& text, bool degrees) {
    const auto v = parse_number_list(text, 4, "--pose (x,y,z,alpha)");
    Pose p{v[0], v[1], v[2], angle_in(v[3], degrees)};
    for (Coord c : {Coord::X, Coord::Y, Coord::Z, Coord::Alpha}) {
        if (!is_active(mode, c) && p.get(c) != 0.0) {
            throw ConfigurationError("operation mode " + std::to_string(mode_id(mode)) +
                                     " has no " + coord_name(c) + " coordinate; pass 0");
        }
    }
    return canonical_pose(mode, p);
}

JointInput joints_from_text(const std::string& text) {
    const auto v = parse_number_list(text, 3, "--joints (rho1,rho2,rho3)");
    return JointInput{{v[0], v[1], v[2]}};
}

// Emits text to stdout or to a file (relative paths land in output_dir).
void emit(const std::string& text, const std::string& path, const Config& cfg, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::filesystem::path target(path);
    if (target.is_relative() && !cfg.output_dir.empty()) {
        target = std::filesystem::path(cfg.output_dir) / target;
    }
    std::ofstream file(target, std::ios::binary | std::ios::trunc);
    file << text;
    file.flush();
    if (!file) {
        throw ConfigurationError("cannot write output file '" + target.string() + "'");
    }
}

struct NoResult : Error {
    using Error::Error;
};

struct Common {
    std::string config_path;
    std::string preset;
    long threads = -1;
    bool degrees = false;
};

Config resolve_config(const Common& common) {
    Config cfg;
    if (!common.config_path.empty()) {
        cfg = load_config_file(common.config_path, cfg);
    } else if (const char* env = std::getenv("PIPIR_CONFIG"); env != nullptr && *env != '\0') {
        cfg = load_config_file(env, cfg);
    }
    if (!common.preset.empty()) {
        cfg.preset = preset_from_string(common.preset);
    }
    if (common.threads >= 0) {
        cfg.threads = checked_threads(common.threads);
    }
    return cfg;
}

std::string run_ik(const Config& cfg, int mode_number, const std::string& pose_text,
                   const std::string& wm_text, bool degrees) {
    const Mode mode = mode_from_int(mode_number);
    const Pose pose = pose_from_text(mode, pose_text, degrees);
    const ConstraintSystem sys = build_system(mode, cfg.params, cfg.preset);
    std::ostringstream os;
    os << "# command=ik\n# mode=" << mode_number << '\n';
    write_params(os, cfg);
    os << "# pose=" << join_numbers({pose.x, pose.y, pose.z, angle_out(pose.alpha, degrees)})
       << '\n';
    os << "# angle_unit=" << (degrees ? "deg" : "rad") << '\n';
    if (wm_text == "all") {
        const auto entries = enumerate_ik(sys, pose);
        if (entries.empty()) {
            const IkSolution probe = solve_ik(sys, pose, WorkingMode{});
            throw UnreachableError(
                probe.unreachable_leg,
                probe.discriminant[static_cast<std::size_t>(probe.unreachable_leg)]);
        }
        os << "# wm=all\nwm,rho1,rho2,rho3\n";
        for (const IkEntry& e : entries) {
            os << e.wm.str() << ',' << join_numbers({e.joints[0], e.joints[1], e.joints[2]})
               << '\n';
        }
        return os.str();
    }
    const WorkingMode wm = WorkingMode::parse(wm_text);
    const JointInput q = inverse_kinematics(sys, pose, wm);
    os << "# wm=" << wm.str() << "\nrho1,rho2,rho3\n";
    os << join_numbers({q[0], q[1], q[2]}) << '\n';
    return os.str();
}

std::string run_fk(const Config& cfg, int mode_number, const std::string& joints_text,
                   bool degrees) {
    const Mode mode = mode_from_int(mode_number);
    const JointInput q = joints_from_text(joints_text);
    const ConstraintSystem sys = build_system(mode, cfg.params, cfg.preset);
    const FkSolutionSet sols = forward_kinematics(sys, q);
    if (sols.empty()) {
        throw NoResult("no real forward kinematics solution for joints " +
                       join_numbers({q[0], q[1], q[2]}));
    }
    std::ostringstream os;
    os << "# command=fk\n# mode=" << mode_number << '\n';
    write_params(os, cfg);
    os << "# joints=" << join_numbers({q[0], q[1], q[2]}) << '\n';
    os << "# angle_unit=" << (degrees ? "deg" : "rad") << '\n';
    os << "# solutions=" << sols.size() << '\n';
    os << "x,y,z,alpha,wm,residual\n";
    for (const FkSolution& s : sols) {
        os << join_numbers({s.pose.x, s.pose.y, s.pose.z, angle_out(s.pose.alpha, degrees)}) << ','
           << s.wm.str() << ',' << format_number(s.max_residual) << '\n';
    }
    return os.str();
}

std::string run_singular(const Config& cfg, int mode_number, const std::string& pose_text,
                         const std::string& wm_text, const std::string& joints_text,
                         bool degrees) {
    const Mode mode = mode_from_int(mode_number);
    const Pose pose = pose_from_text(mode, pose_text, degrees);
    const ConstraintSystem sys = build_system(mode, cfg.params, cfg.preset);
    JointInput q;
    std::string wm_label;
    if (!joints_text.empty()) {
        q = joints_from_text(joints_text);
        const double res = max_abs_residual(sys, pose, q);
        if (!(res < kManifoldTol)) {
            throw ConfigurationError("pose and joints are off the constraint manifold (residual " +
                                     format_number(res) + ")");
        }
        wm_label = working_mode_of(sys, pose, q).str();
    } else {
        const WorkingMode wm = WorkingMode::parse(wm_text);
        q = inverse_kinematics(sys, pose, wm);
        wm_label = wm.str();
    }
    const SingularityVerdict v = classify(sys, pose, q, cfg.tol);
    std::ostringstream os;
    os << "# command=singular\n# mode=" << mode_number << '\n';
    write_params(os, cfg);
    os << "# tol_serial=" << format_number(cfg.tol.serial) << '\n';
    os << "# tol_parallel=" << format_number(cfg.tol.parallel) << '\n';
    os << "pose=" << join_numbers({pose.x, pose.y, pose.z, angle_out(pose.alpha, degrees)})
       << '\n';
    os << "wm=" << wm_label << '\n';
    os << "joints=" << join_numbers({q[0], q[1], q[2]}) << '\n';
    os << "verdict=" << to_string(v.kind) << '\n';
    os << "detA=" << format_number(v.detA) << '\n';
    os << "detA_scale=" << format_number(v.detA_scale) << '\n';
    os << "B=" << join_numbers({v.B[0], v.B[1], v.B[2]}) << '\n';
    const auto factors = parallel_factor_values(sys, pose, q);
    os << "factors=";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        os << (i ? "," : "") << format_number(factors[i]);
    }
    os << '\n';
    for (std::size_t i = 0; i < v.serial_legs.size(); ++i) {
        os << "serial_leg=" << v.serial_legs[i] << ": " << v.serial_conditions[i] << '\n';
    }
    return os.str();
}

std::pair<double, double> range_from_text(const std::string& text, const std::string& what) {
    const auto v = parse_number_list(text, 2, what);
    if (!(v[1] > v[0])) {
        throw ConfigurationError(what + " needs lo < hi");
    }
    return {v[0], v[1]};
}

void write_axis(std::ostream& os, const std::string& key, const Axis& a, bool degrees) {
    const bool angle = a.periodic;
    os << "# " << key << '=' << a.name << '\n';
    os << "# " << key << "_range=" << format_number(angle_out(a.lo, degrees && angle)) << ','
       << format_number(angle_out(a.hi, degrees && angle)) << '\n';
    os << "# " << key << "_samples=" << a.n << '\n';
    os << "# " << key << "_periodic=" << (a.periodic ? 1 : 0) << '\n';
}

std::string run_wsmap(const Config& cfg, int mode_number, const std::string& wm_text, int res,
                      const std::string& range_text, double y, bool degrees) {
    const Mode mode = mode_from_int(mode_number);
    const WorkingMode wm = WorkingMode::parse(wm_text);
    GridSpec spec = workspace_spec(mode, wm, res);
    spec.fixed.y = y;
    spec.threads = cfg.threads;
    spec.edge_samples = cfg.edge_samples;
    spec.tol = cfg.tol;
    if (!range_text.empty()) {
        const auto [lo, hi] = range_from_text(range_text, "--range");
        for (Axis* a : {&spec.axis1, &spec.axis2}) {
            if (!a->periodic) {
                a->lo = lo;
                a->hi = hi;
            }
        }
    }
    const ConstraintSystem sys = build_system(mode, cfg.params, cfg.preset);
    GridMap map = workspace_map(sys, spec);
    const AspectLabeling lab = label_aspects(map);

    std::ostringstream os;
    os << "# command=wsmap\n# mode=" << mode_number << "\n# wm=" << wm.str() << '\n';
    write_params(os, cfg);
    write_axis(os, "coord1", spec.axis1, degrees);
    write_axis(os, "coord2", spec.axis2, degrees);
    os << "# resolution=" << res << '\n';
    os << "# y=" << format_number(y) << '\n';
    os << "# edge_samples=" << spec.edge_samples << '\n';
    os << "# tol_serial=" << format_number(spec.tol.serial) << '\n';
    os << "# tol_parallel=" << format_number(spec.tol.parallel) << '\n';
    os << "# angle_unit=" << (degrees ? "deg" : "rad") << '\n';
    os << "# aspects=" << lab.count() << '\n';
    os << "# unresolved_cells=" << lab.unresolved_cells << '\n';
    os << "# aspect_id_none=0\n";
    os << "coord1,coord2,feasible,detA_sign,aspect_id\n";
    for (int i1 = 0; i1 < map.n1(); ++i1) {
        const double u = angle_out(spec.axis1.value(i1), degrees && spec.axis1.periodic);
        const std::string us = format_number(u);
        for (int i2 = 0; i2 < map.n2(); ++i2) {
            const Cell& c = map.at(i1, i2);
            const double v = angle_out(spec.axis2.value(i2), degrees && spec.axis2.periodic);
            os << us << ',' << format_number(v) << ',' << (c.feasible ? 1 : 0) << ','
               << static_cast<int>(c.detA_sign) << ',' << std::max(c.aspect_id, 0) << '\n';
        }
    }
    return os.str();
}

std::string run_jsmap(const Config& cfg, int mode_number, int res, const std::string& range_text,
                      double rho1) {
    const Mode mode = mode_from_int(mode_number);
    GridSpec spec = jointspace_spec(mode, res);
    spec.rho1 = rho1;
    spec.threads = cfg.threads;
    spec.tol = cfg.tol;
    if (!range_text.empty()) {
        const auto [lo, hi] = range_from_text(range_text, "--range");
        spec.axis1.lo = spec.axis2.lo = lo;
        spec.axis1.hi = spec.axis2.hi = hi;
    }
    const ConstraintSystem sys = build_system(mode, cfg.params, cfg.preset);
    const GridMap map = jointspace_map(sys, spec);
    const auto regions = solution_regions(map);
    int holes = 0;
    for (const auto& r : regions) {
        holes += r.holes;
    }

    std::ostringstream os;
    os << "# command=jsmap\n# mode=" << mode_number << '\n';
    write_params(os, cfg);
    os << "# rho1=" << format_number(rho1) << '\n';
    write_axis(os, "coord1", spec.axis1, false);
    write_axis(os, "coord2", spec.axis2, false);
    os << "# resolution=" << res << '\n';
    os << "# regions=" << regions.size() << '\n';
    os << "# holes=" << holes << '\n';
    os << "rho2,rho3,n_fk\n";
    for (int i1 = 0; i1 < map.n1(); ++i1) {
        const std::string us = format_number(spec.axis1.value(i1));
        for (int i2 = 0; i2 < map.n2(); ++i2) {
            os << us << ',' << format_number(spec.axis2.value(i2)) << ','
               << static_cast<int>(map.at(i1, i2).n_fk) << '\n';
        }
    }
    return os.str();
}

std::string fixed10(double v) {
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f", v);
    return buf;
}

struct TransitionTexts {
    std::string report;
    std::string csv;
};

TransitionTexts run_transitions(const Config& cfg, int res, const std::array<std::string, 3>& wms) {
    TransitionOptions opts;
    opts.resolution = res;
    opts.threads = cfg.threads;
    opts.edge_samples = cfg.edge_samples;
    opts.tol = cfg.tol;
    for (std::size_t k = 0; k < 3; ++k) {
        if (!wms[k].empty()) {
            opts.wm[k] = WorkingMode::parse(wms[k]);
        }
    }
    const TransitionReport rep = transition_report(cfg.params, cfg.preset, opts);
    const Preset other =
        cfg.preset == Preset::Consistent ? Preset::PaperIkMode4 : Preset::Consistent;
    const TransitionEntry other4 =
        transition_entry(build_system(Mode::Four, cfg.params, other), opts.wm[2], opts);

    std::ostringstream os;
    std::ostringstream csv;
    os << "# command=transitions\n";
    write_params(os, cfg);
    os << "# resolution=" << res << '\n';
    csv << os.str();
    csv << "mode,coord,t,aspect_id\n";
    for (const TransitionEntry& e : rep.entries) {
        const int m = mode_id(e.mode);
        const std::string coord = coord_name(e.line.coord);
        const std::string tag = "mode " + std::to_string(m) + ": ";
        os << tag << "working mode " << e.wm.str() << '\n';
        os << tag << "home line " << e.constraints << ", y = 0; free " << coord << '\n';
        os << tag << "aspects " << e.aspect_count << '\n';
        os << tag << "reachable aspects";
        for (int id : e.reachable_aspects) {
            os << ' ' << id;
        }
        os << '\n';
        std::size_t i = 0;
        while (i < e.samples.size()) {
            std::size_t j = i;
            while (j + 1 < e.samples.size() && e.samples[j + 1].aspect_id == e.samples[i].aspect_id) {
                ++j;
            }
            if (e.samples[i].aspect_id >= 0) {
                os << tag << "segment " << coord << " in [" << format_number(e.samples[i].t) << ", "
                   << format_number(e.samples[j].t) << "] aspect " << e.samples[i].aspect_id << '\n';
            }
            i = j + 1;
        }
        if (e.boundaries.empty()) {
            os << tag << "no boundary\n";
        }
        for (double b : e.boundaries) {
            os << tag << "boundary " << coord << " = " << fixed10(b) << '\n';
        }
        if (e.mode == Mode::Four) {
            for (double b : other4.boundaries) {
                os << tag << "reference boundary " << coord << " = " << fixed10(b) << " (preset "
                   << preset_name(other) << ")\n";
            }
        }
        for (const LineSample& s : e.samples) {
            csv << m << ',' << coord << ',' << format_number(s.t) << ',' << std::max(s.aspect_id, 0)
                << '\n';
        }
    }
    return {os.str(), csv.str()};
}

} // namespace

std::string format_number(double v) {
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<double> parse_number_list(const std::string& text, std::size_t count,
                                      const std::string& what) {
    std::vector<double> out;
    std::string_view rest = text;
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(parse_double(rest.substr(0, comma), what));
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    if (out.size() != count) {
        throw ConfigurationError(what + " needs " + std::to_string(count) + " comma-separated values, got " +
                                 std::to_string(out.size()));
    }
    return out;
}

Config parse_config(std::string_view text, const std::string& source, Config base) {
    Config cfg = std::move(base);
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = source + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigurationError(where + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const std::string what = where + " " + key;
        if (key == "d1") {
            cfg.params.d1 = parse_double(value, what);
        } else if (key == "d2") {
            cfg.params.d2 = parse_double(value, what);
        } else if (key == "d3") {
            cfg.params.d3 = parse_double(value, what);
        } else if (key == "d4") {
            cfg.params.d4 = parse_double(value, what);
        } else if (key == "l") {
            cfg.params.l = parse_double(value, what);
        } else if (key == "preset") {
            cfg.preset = preset_from_string(value);
        } else if (key == "tol_serial") {
            cfg.tol.serial = checked_tolerance(parse_double(value, what), what);
        } else if (key == "tol_parallel") {
            cfg.tol.parallel = checked_tolerance(parse_double(value, what), what);
        } else if (key == "resolution") {
            cfg.resolution = checked_resolution(parse_integer(value, what), what);
        } else if (key == "threads") {
            cfg.threads = checked_threads(parse_integer(value, what));
        } else if (key == "edge_samples") {
            const long n = parse_integer(value, what);
            if (n < 0 || n > 64) {
                throw ConfigurationError(what + " must be in [0, 64]");
            }
            cfg.edge_samples = static_cast<int>(n);
        } else if (key == "output_dir") {
            cfg.output_dir = std::string(value);
        } else {
            throw ConfigurationError(where + ": unknown key '" + key + "'");
        }
    }
    if (!cfg.params.valid()) {
        throw ConfigurationError(source + ": design parameters must be positive lengths");
    }
    return cfg;
}

Config load_config_file(const std::string& path, Config base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigurationError("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path, std::move(base));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kinematics toolkit for a 3-PRPiR parallel robot", "pipir"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pipir 1.0.0");

    Common common;
    app.add_option("--config", common.config_path,
                   "Config file of 'key = value' lines (overrides PIPIR_CONFIG)");
    app.add_option("--preset", common.preset, "Constraint coefficients: consistent | paper-ik-mode4");
    app.add_option("--threads", common.threads, "Worker threads for maps (0 = all cores)");
    app.add_flag("--degrees", common.degrees, "Read and print angles in degrees");

    int mode = 0;
    std::string pose;
    std::string joints;
    std::string wm = "+++";
    std::string out_path;
    std::string range;
    int res = 0;
    double y = 0.0;
    double rho1 = 0.0;
    std::string csv_path;
    std::array<std::string, 3> tr_wm;

    auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", mode, "Operation mode 1-4")->required();
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    };

    CLI::App* ik = app.add_subcommand("ik", "Inverse kinematics: joint solutions for a pose");
    add_mode(ik);
    ik->add_option("--pose", pose, "x,y,z,alpha")->required();
    ik->add_option("--wm", wm, "Working mode such as +++ or +-+, or 'all'");
    add_out(ik);

    CLI::App* fk = app.add_subcommand("fk", "Forward kinematics: poses for joint inputs");
    add_mode(fk);
    fk->add_option("--joints", joints, "rho1,rho2,rho3")->required();
    add_out(fk);

    CLI::App* singular = app.add_subcommand("singular", "Serial/parallel singularity verdict");
    add_mode(singular);
    singular->add_option("--pose", pose, "x,y,z,alpha")->required();
    singular->add_option("--wm", wm, "Working mode used to solve the joints");
    singular->add_option("--joints", joints, "rho1,rho2,rho3 instead of solving IK");
    add_out(singular);

    CLI::App* wsmap = app.add_subcommand("wsmap", "Workspace section map with aspect labels (CSV)");
    add_mode(wsmap);
    wsmap->add_option("--wm", wm, "Working mode");
    wsmap->add_option("--res", res, "Samples per axis");
    wsmap->add_option("--range", range, "lo,hi for the linear section axes");
    wsmap->add_option("--y", y, "Fixed y of the section");
    add_out(wsmap);

    CLI::App* jsmap = app.add_subcommand("jsmap", "Joint-space solution-count map (CSV)");
    add_mode(jsmap);
    jsmap->add_option("--res", res, "Samples per axis");
    jsmap->add_option("--range", range, "lo,hi for both rho2 and rho3");
    jsmap->add_option("--rho1", rho1, "Slice value of rho1");
    add_out(jsmap);

    CLI::App* transitions =
        app.add_subcommand("transitions", "Operation-mode transition report along the home lines");
    transitions->add_option("--res", res, "Samples per axis of the underlying maps");
    transitions->add_option("--wm2", tr_wm[0], "Working mode for mode 2 (default +++)");
    transitions->add_option("--wm3", tr_wm[1], "Working mode for mode 3 (default +++)");
    transitions->add_option("--wm4", tr_wm[2], "Working mode for mode 4 (default ++-)");
    transitions->add_option("--csv", csv_path, "Also write the sampled home lines as CSV");
    add_out(transitions);

    for (CLI::App* sub : {ik, fk, singular, wsmap, jsmap, transitions}) {
        sub->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        err << "pipir: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const Config cfg = resolve_config(common);
        const int grid_res = res != 0 ? checked_resolution(res, "--res") : cfg.resolution;
        std::string text;
        if (ik->parsed()) {
            text = run_ik(cfg, mode, pose, wm, common.degrees);
        } else if (fk->parsed()) {
            text = run_fk(cfg, mode, joints, common.degrees);
        } else if (singular->parsed()) {
            text = run_singular(cfg, mode, pose, wm, joints, common.degrees);
        } else if (wsmap->parsed()) {
            text = run_wsmap(cfg, mode, wm, grid_res, range, y, common.degrees);
        } else if (jsmap->parsed()) {
            text = run_jsmap(cfg, mode, grid_res, range, rho1);
        } else {
            const TransitionTexts t = run_transitions(cfg, grid_res, tr_wm);
            if (!csv_path.empty()) {
                emit(t.csv, csv_path, cfg, out);
            }
            text = t.report;
        }
        emit(text, out_path, cfg, out);
        return kExitOk;
    } catch (const UnreachableError& e) {
        err << "pipir: " << e.what() << '\n';
        return kExitNoResult;
    } catch (const NoResult& e) {
        err << "pipir: " << e.what() << '\n';
        return kExitNoResult;
    } catch (const ConfigurationError& e) {
        err << "pipir: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "pipir: " << e.what() << '\n';
        return kExitNoResult;
    } catch (const std::exception& e) {
        err << "pipir: " << e.what() << '\n';
        return kExitUsage;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

} // namespace pipir::cli
