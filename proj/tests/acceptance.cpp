// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "support.hpp"

namespace {

using namespace pipir;
using test::kModes;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Line {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Line> g_lines;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %d (%s): %s %s\n", id, name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    g_lines.push_back({id, name, pass, detail});
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void home_ik() {
    const double r = std::sqrt(391.0) / 20.0;
    double worst_joint = 0.0;
    double worst_res = 0.0;
    for (Mode m : kModes) {
        const auto sys = build_system(m);
        const JointInput q = inverse_kinematics(sys, home_pose(m), WorkingMode{{1, 1, 1}});
        worst_joint = std::max({worst_joint, std::abs(q[0] - r), std::abs(q[1] - r), std::abs(q[2] - 0.6)});
        worst_res = std::max(worst_res, max_abs_residual(sys, home_pose(m), q));
    }
    const bool pass = worst_joint <= 1e-9 && worst_res < 1e-10;
    report(1, "home IK", pass,
           "max joint error " + fmt("%.3g", worst_joint) + ", max residual " + fmt("%.3g", worst_res));
}

void round_trip() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    std::size_t checked = 0;
    for (Mode m : kModes) {
        const auto sys = build_system(m);
        int poses = 0;
        while (poses < 1000) {
            const Pose p = test::random_pose(m, rng);
            const auto entries = enumerate_ik(sys, p);
            if (entries.empty()) {
                continue;
            }
            ++poses;
            for (const auto& e : entries) {
                worst = std::max(worst, test::nearest_solution(m, forward_kinematics(sys, e.joints), p));
                ++checked;
            }
        }
    }
    const double t = seconds_since(t0);
    const bool pass = worst <= 1e-8 && t < 10.0;
    report(2, "IK-FK round trip", pass,
           std::to_string(checked) + " (pose, working mode) pairs, max pose error " + fmt("%.3g", worst) +
               ", " + fmt("%.2f", t) + " s");
}

void fk_cardinality() {
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::ostringstream detail;
    bool pass = true;
    for (Mode m : kModes) {
        const auto sys = build_system(m);
        const std::size_t limit = m == Mode::One ? 2 : 4;
        std::size_t most = 0;
        for (int k = 0; k < 100000; ++k) {
            const JointInput q{{u(rng), u(rng), u(rng)}};
            most = std::max(most, forward_kinematics(sys, q).size());
        }
        pass = pass && most <= limit;
        detail << "mode " << mode_id(m) << " max " << most << "/" << limit << (m == Mode::Four ? "" : ", ");
    }
    report(3, "FK cardinality", pass, detail.str());
}

struct RegionSummary {
    std::size_t regions = 0;
    std::size_t with_holes = 0;
    std::size_t with_four = 0;
    std::size_t only_two = 0;
    int holes = 0;
};

RegionSummary summarize(Mode m, Preset preset, int res) {
    const auto sys = build_system(m, {}, preset);
    const auto regions = solution_regions(jointspace_map(sys, jointspace_spec(m, res)));
    RegionSummary s;
    s.regions = regions.size();
    for (const auto& r : regions) {
        s.with_holes += r.holes > 0 ? 1 : 0;
        s.holes += r.holes;
        s.with_four += std::count(r.counts.begin(), r.counts.end(), 4) > 0 ? 1 : 0;
        s.only_two += r.counts == std::vector<int>{2} ? 1 : 0;
    }
    return s;
}

std::string describe(const RegionSummary& s) {
    std::ostringstream o;
    o << s.regions << " regions, " << s.with_holes << " with holes, " << s.with_four << " with n_fk=4, "
      << s.only_two << " only n_fk=2";
    return o.str();
}

void jointspace_structure() {
    std::ostringstream detail;
    bool pass = true;
    for (Mode m : kModes) {
        const Preset preset = m == Mode::Four ? Preset::PaperIkMode4 : Preset::Consistent;
        const RegionSummary fine = summarize(m, preset, 256);
        const RegionSummary coarse = summarize(m, preset, 128);
        bool ok = fine.regions == coarse.regions;
        switch (m) {
        case Mode::One:
            ok = ok && fine.regions == 1 && fine.only_two == 1;
            break;
        case Mode::Two:
            ok = ok && fine.regions == 4 && fine.with_holes >= 2;
            break;
        case Mode::Three:
            ok = ok && fine.regions == 4 && fine.with_four == 2 && fine.only_two == 2;
            break;
        case Mode::Four:
            ok = ok && fine.regions == 2 && fine.holes >= 1;
            break;
        }
        pass = pass && ok;
        detail << "mode " << mode_id(m) << (m == Mode::Four ? " [paper-ik-mode4]" : "") << ": "
               << describe(fine) << " (128^2: " << coarse.regions << " regions) " << (ok ? "ok" : "MISMATCH")
               << "; ";
    }
    const RegionSummary alt = summarize(Mode::Four, Preset::Consistent, 256);
    detail << "info mode 4 [consistent]: " << describe(alt) << ", " << alt.holes << " holes";
    report(4, "joint-space regions", pass, detail.str());
}

void aspect_counts() {
    const std::array<std::size_t, 4> want{1, 4, 2, 6};
    std::ostringstream detail;
    bool pass = true;
    for (Mode m : kModes) {
        const auto sys = build_system(m);
        GridMap map = workspace_map(sys, workspace_spec(m, WorkingMode{{1, 1, 1}}, 512));
        std::size_t got = 0;
        std::string extra;
        if (m == Mode::One) {
            got = feasible_regions(map);
        } else {
            const AspectLabeling lab = label_aspects(map);
            got = lab.count();
            extra = " (unresolved slivers " + std::to_string(lab.unresolved_components) + ")";
        }
        const std::size_t expect = want[static_cast<std::size_t>(mode_id(m) - 1)];
        pass = pass && got == expect;
        detail << "mode " << mode_id(m) << " " << got << "/" << expect << extra << (m == Mode::Four ? "" : ", ");
    }
    report(5, "workspace aspects at 512^2", pass, detail.str());
}

// Reference roots computed from closed forms, independent of the library.
double bisect_oracle(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void transitions() {
    std::ostringstream detail;
    bool pass = true;

    const auto sys2 = build_system(Mode::Two);
    const WorkingMode plus{{1, 1, 1}};
    const double root2 =
        find_boundary_root(sys2, plus, home_line(Mode::Two), -0.5, 0.0, BoundaryFunction::Factor1);
    const double x = -0.225;
    const double u = std::sqrt(-400.0 * x * x + 120.0 * x + 391.0);
    const double v = std::sqrt(9.0 - 25.0 * x * x);
    const double identity = x * u - 4.0 * x * v + 0.6 * v;
    const bool ok2 = std::abs(root2 + 9.0 / 40.0) <= 1e-9 && std::abs(identity) <= 1e-9;
    pass = pass && ok2;
    detail << "mode 2 root " << fmt("%.12f", root2) << ", identity " << fmt("%.2g", identity) << "; ";

    const auto sys3 = build_system(Mode::Three);
    const TransitionEntry e3 = transition_entry(sys3, plus, {256});
    int sign = 0;
    bool single = true;
    int reachable = 0;
    int serial = 0;
    for (int k = 0; k <= 20000; ++k) {
        const double t = -1.2 + 2.4 * k / 20000.0;
        const Pose p = home_line(Mode::Three).at(t);
        const IkSolution ik = solve_ik(sys3, p, plus);
        if (!ik.reachable) {
            continue;
        }
        const JacobianPair jp = jacobians_unchecked(sys3, p, ik.joints);
        if (std::abs(jp.B[0]) <= 1e-9 || std::abs(jp.B[1]) <= 1e-9 || std::abs(jp.B[2]) <= 1e-9) {
            ++serial;
            continue;
        }
        ++reachable;
        const double d = jp.detA();
        const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) {
            single = false;
        }
        sign = s;
    }
    const bool ok3 = single && e3.reachable_aspects.size() == 1 && e3.boundaries.empty() && reachable > 0;
    pass = pass && ok3;
    detail << "mode 3 aspects on line " << e3.reachable_aspects.size() << ", det A sign constant over "
           << reachable << " samples " << (single ? "yes" : "no") << " (" << serial
           << " serial-singular endpoint samples excluded); ";

    const WorkingMode wm4{{1, 1, -1}};
    const double surd = 528.0 / 35.0 - 8.0 * std::sqrt(165.0) / 7.0;
    const auto printed4 = build_system(Mode::Four, {}, Preset::PaperIkMode4);
    const TransitionEntry ep = transition_entry(printed4, wm4, {256});
    const bool okp = ep.boundaries.size() == 1 && std::abs(ep.boundaries[0] - surd) <= 1e-6;
    pass = pass && okp;
    detail << "mode 4 paper-ik-mode4 " << (ep.boundaries.empty() ? std::string("none") : fmt("%.10f", ep.boundaries[0]))
           << " vs " << fmt("%.10f", surd) << "; ";

    const double ref = bisect_oracle(
        [](double z) {
            const double uu = std::sqrt(391.0 - 400.0 * z * z);
            const double ww = std::sqrt(144.0 + 640.0 * z - 400.0 * z * z);
            return 5.0 * z * (uu + ww) - 4.0 * uu;
        },
        0.3, 0.5);
    const auto cons4 = build_system(Mode::Four);
    bool okc = true;
    detail << "mode 4 consistent reference " << fmt("%.12f", ref) << ":";
    for (int res : {128, 256, 512}) {
        const TransitionEntry ec = transition_entry(cons4, wm4, {res});
        const bool ok = ec.boundaries.size() == 1 && std::abs(ec.boundaries[0] - ref) <= 1e-9;
        okc = okc && ok;
        detail << " " << res << "^2 "
               << (ec.boundaries.empty() ? std::string("none") : fmt("%.12f", ec.boundaries[0]));
    }
    pass = pass && okc;
    report(6, "transition boundaries", pass, detail.str());
}

double fd_relative_error(const ConstraintSystem& sys, const Pose& p, const JointInput& q) {
    constexpr double h = 1e-6;
    const JacobianPair jp = jacobians(sys, p, q);
    const auto& active = mode_info(sys.mode).active;
    double worst = 0.0;
    for (std::size_t col = 0; col < 3; ++col) {
        Pose hi = p;
        Pose lo = p;
        hi.set(active[col], p.get(active[col]) + h);
        lo.set(active[col], p.get(active[col]) - h);
        const auto rh = residual(sys, hi, q);
        const auto rl = residual(sys, lo, q);
        JointInput qh = q;
        JointInput ql = q;
        qh[col] += h;
        ql[col] -= h;
        const auto sh = residual(sys, p, qh);
        const auto sl = residual(sys, p, ql);
        for (std::size_t row = 0; row < 3; ++row) {
            const double fa = (rh[row] - rl[row]) / (2.0 * h);
            const double fb = (sh[row] - sl[row]) / (2.0 * h);
            const double b = row == col ? jp.B[row] : 0.0;
            worst = std::max(worst, std::abs(jp.A[row][col] - fa) / std::max(1.0, std::abs(fa)));
            worst = std::max(worst, std::abs(b - fb) / std::max(1.0, std::abs(fb)));
        }
    }
    return worst;
}

double condition_scale(Mode m, std::size_t leg) {
    const bool scaled = (leg == 0 && (m == Mode::Two || m == Mode::Four)) || (leg == 2 && m == Mode::Three);
    return scaled ? 5.0 : 0.5;
}

// Walks from a reachable pose along a random direction until IK fails, then
// bisects onto the reachability boundary. The leg whose discriminant vanishes
// there sits exactly at a serial singularity.
bool boundary_configuration(const ConstraintSystem& sys, std::mt19937_64& rng, test::Configuration& out,
                            std::size_t& leg) {
    const auto c = test::random_configuration(sys, rng);
    std::normal_distribution<double> n01;
    const auto& active = mode_info(sys.mode).active;
    std::array<double, 3> dir{n01(rng), n01(rng), n01(rng)};
    auto at = [&](double t) {
        Pose p = c.pose;
        for (std::size_t j = 0; j < 3; ++j) {
            p.set(active[j], c.pose.get(active[j]) + t * dir[j]);
        }
        return p;
    };
    double lo = 0.0;
    double hi = 0.0;
    for (int k = 1; k <= 400; ++k) {
        const double t = 0.01 * k;
        if (!solve_ik(sys, at(t), c.wm).reachable) {
            hi = t;
            break;
        }
        lo = t;
    }
    if (hi == 0.0) {
        return false;
    }
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (solve_ik(sys, at(mid), c.wm).reachable ? lo : hi) = mid;
    }
    const IkSolution ik = solve_ik(sys, at(lo), c.wm);
    leg = static_cast<std::size_t>(std::min_element(ik.discriminant.begin(), ik.discriminant.end()) -
                                   ik.discriminant.begin());
    out.pose = at(lo);
    out.joints = ik.joints;
    out.wm = c.wm;
    return ik.boundary[leg];
}

void singularity_checks() {
    std::mt19937_64 rng(1007);
    bool pass = true;
    std::ostringstream detail;
    for (Mode m : kModes) {
        const auto sys = build_system(m);
        std::size_t sign_bad = 0;
        std::size_t verdict_bad = 0;
        double fd_worst = 0.0;
        double cond_worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const auto c = test::random_configuration(sys, rng);
            const JacobianPair jp = jacobians(sys, c.pose, c.joints);
            if (m != Mode::One) {
                const auto f = parallel_factor_values(sys, c.pose, c.joints);
                const double prod = factor_product_ratio(m) * f[0] * f[1];
                if ((jp.detA() > 0.0) != (prod > 0.0)) {
                    ++sign_bad;
                }
            }
            fd_worst = std::max(fd_worst, fd_relative_error(sys, c.pose, c.joints));
            const auto cond = serial_condition_values(m, c.pose, c.joints);
            const auto v = classify(sys, c.pose, c.joints);
            for (std::size_t i = 0; i < 3; ++i) {
                cond_worst = std::max(cond_worst, std::abs(cond[i] - condition_scale(m, i) * jp.B[i]));
                const bool listed = std::count(v.serial_legs.begin(), v.serial_legs.end(), int(i) + 1) > 0;
                if (listed != (std::abs(jp.B[i]) <= 1e-9)) {
                    ++verdict_bad;
                }
            }
        }
        std::size_t built = 0;
        std::size_t boundary_bad = 0;
        for (int k = 0; built < 200 && k < 2000; ++k) {
            test::Configuration c;
            std::size_t leg = 0;
            if (!boundary_configuration(sys, rng, c, leg)) {
                continue;
            }
            ++built;
            const auto cond = serial_condition_values(m, c.pose, c.joints);
            const auto v = classify(sys, c.pose, c.joints);
            const bool listed = std::count(v.serial_legs.begin(), v.serial_legs.end(), int(leg) + 1) > 0;
            if (!listed || std::abs(cond[leg]) > 1e-9 || max_abs_residual(sys, c.pose, c.joints) > 1e-9) {
                ++boundary_bad;
            }
        }
        const bool ok = sign_bad == 0 && verdict_bad == 0 && fd_worst <= 1e-6 && cond_worst <= 1e-9 &&
                        boundary_bad == 0 && built == 200;
        pass = pass && ok;
        detail << "mode " << mode_id(m) << ": sign mismatches " << sign_bad << ", FD rel " << fmt("%.2g", fd_worst)
               << ", condition-B gap " << fmt("%.2g", cond_worst) << ", verdict mismatches " << verdict_bad
               << ", boundary configs " << built - boundary_bad << "/" << built << "; ";
    }
    {
        const auto sys = build_system(Mode::Four);
        const double h = 0.25 - std::cos(0.7) / 10.0;
        const Pose p{0.0, 0.3, std::sqrt(1.0 - h * h), 0.7};
        JointInput q = inverse_kinematics(sys, p, WorkingMode{});
        q[0] = p.y - std::sin(0.7) / 10.0;
        const auto v = classify(sys, p, q);
        const bool named = v.serial_legs == std::vector<int>{1} &&
                           v.serial_conditions.front() == "-10*y + sin(alpha) + 10*rho1 = 0";
        pass = pass && named;
        detail << "mode 4 leg 1 condition text " << (named ? "ok" : "MISMATCH");
    }
    report(7, "singularity cross-checks", pass, detail.str());
}

void y_shift() {
    std::mt19937_64 rng(1008);
    double worst = 0.0;
    bool same_count = true;
    std::size_t nonempty = 0;
    for (Mode m : kModes) {
        const auto sys = build_system(m);
        for (int k = 0; k < 100; ++k) {
            const auto c = test::random_configuration(sys, rng);
            const auto base = forward_kinematics(sys, c.joints);
            nonempty += base.empty() ? 0 : 1;
            for (double d : {-1.0, 0.37, 2.0}) {
                const JointInput q{{c.joints[0] + d, c.joints[1] + d, c.joints[2] + d}};
                const auto shifted = forward_kinematics(sys, q);
                same_count = same_count && shifted.size() == base.size();
                for (const FkSolution& s : base) {
                    Pose p = s.pose;
                    p.y += d;
                    worst = std::max(worst, test::nearest_solution(m, shifted, p));
                }
            }
        }
    }
    const bool pass = same_count && worst <= 1e-10 && nonempty == 400;
    report(8, "y-shift equivariance", pass,
           std::string("cardinality preserved ") + (same_count ? "yes" : "no") + ", max error " +
               fmt("%.3g", worst));
}

} // namespace

int main() {
    const auto t0 = Clock::now();
    home_ik();
    round_trip();
    fk_cardinality();
    jointspace_structure();
    aspect_counts();
    transitions();
    singularity_checks();
    y_shift();
    std::size_t failed = 0;
    for (const Line& l : g_lines) {
        failed += l.pass ? 0 : 1;
    }
    std::printf("summary: %zu/%zu criteria passed in %.1f s\n", g_lines.size() - failed, g_lines.size(),
                seconds_since(t0));
    return failed == 0 ? 0 : 1;
}
