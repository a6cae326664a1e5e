#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "pipir/pipir.hpp"

namespace pipir::test {

inline constexpr std::array<Mode, 4> kModes{Mode::One, Mode::Two, Mode::Three, Mode::Four};

// Home joints shared by every mode: (sqrt(391)/20, sqrt(391)/20, 3/5).
inline JointInput home_joints() {
    const double r = std::sqrt(391.0) / 20.0;
    return JointInput{{r, r, 0.6}};
}

// Uniform pose in a box enclosing the mode's workspace section, y in [-1, 1].
inline Pose random_pose(Mode m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    Pose p;
    p.y = unit(rng);
    switch (m) {
    case Mode::One:
        p.x = 1.2 * unit(rng);
        p.z = 1.2 * unit(rng);
        break;
    case Mode::Two:
    case Mode::Three:
        p.x = 0.7 * unit(rng);
        p.alpha = angle(rng);
        break;
    case Mode::Four:
        p.z = 0.4 + 0.7 * unit(rng);
        p.alpha = angle(rng);
        break;
    }
    return canonical_pose(m, p);
}

inline WorkingMode random_wm(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    WorkingMode wm;
    for (int& s : wm.sigma) {
        s = bit(rng) ? 1 : -1;
    }
    return wm;
}

struct Configuration {
    Pose pose;
    JointInput joints;
    WorkingMode wm;
};

// Rejection-samples a reachable pose with strictly positive discriminants.
inline Configuration random_configuration(const ConstraintSystem& sys, std::mt19937_64& rng,
                                          double min_disc = 1e-6) {
    while (true) {
        Configuration c;
        c.pose = random_pose(sys.mode, rng);
        c.wm = random_wm(rng);
        const IkSolution ik = solve_ik(sys, c.pose, c.wm);
        if (!ik.reachable) {
            continue;
        }
        bool interior = true;
        for (double d : ik.discriminant) {
            interior = interior && d > min_disc;
        }
        if (interior) {
            c.joints = ik.joints;
            return c;
        }
    }
}

// Distance on the active coordinates, alpha measured on the circle.
inline double pose_distance(Mode m, const Pose& a, const Pose& b) {
    double d2 = 0.0;
    for (Coord c : mode_info(m).active) {
        const double d = c == Coord::Alpha ? angular_distance(a.alpha, b.alpha) : a.get(c) - b.get(c);
        d2 += d * d;
    }
    return std::sqrt(d2);
}

inline double nearest_solution(Mode m, const FkSolutionSet& set, const Pose& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const FkSolution& s : set) {
        best = std::min(best, pose_distance(m, s.pose, p));
    }
    return best;
}

} // namespace pipir::test
