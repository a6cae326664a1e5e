#pragma once

// Closed-form inverse kinematics (one quadratic per leg) and forward
// kinematics by trilateration or circle intersection plus a linear
// trigonometric equation for the orientation.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pipir/constraint_model.hpp"
#include "pipir/errors.hpp"
#include "pipir/solvers.hpp"

namespace pipir {

inline constexpr double kDiscriminantTol = 1e-12;
inline constexpr double kFkResidualTol = 1e-9;
inline constexpr double kDedupTol = 1e-8;

// IK branch sign per leg; sigma_i = sign(B_ii).
struct WorkingMode {
    std::array<int, 3> sigma{1, 1, 1};

    int operator[](std::size_t i) const noexcept { return sigma[i]; }
    bool operator==(const WorkingMode&) const = default;

    std::string str() const {
        std::string s;
        for (int v : sigma) {
            s += v > 0 ? '+' : '-';
        }
        return s;
    }

    static WorkingMode parse(const std::string& s) {
        if (s.size() != 3) {
            throw ConfigurationError("working mode must be three of '+'/'-', got '" + s + "'");
        }
        WorkingMode wm;
        for (std::size_t i = 0; i < 3; ++i) {
            if (s[i] == '+') {
                wm.sigma[i] = 1;
            } else if (s[i] == '-') {
                wm.sigma[i] = -1;
            } else {
                throw ConfigurationError("working mode must be three of '+'/'-', got '" + s + "'");
            }
        }
        return wm;
    }
};

// All eight sign triplets, '+' before '-' per leg (so "+++" comes first).
inline std::array<WorkingMode, 8> all_working_modes() {
    std::array<WorkingMode, 8> out{};
    for (std::size_t k = 0; k < 8; ++k) {
        for (std::size_t i = 0; i < 3; ++i) {
            out[k].sigma[i] = ((k >> (2 - i)) & 1U) ? -1 : 1;
        }
    }
    return out;
}

// The quadratic (c - rho)^2 = disc that a leg's constraint reduces to.
struct LegQuadratic {
    double center = 0.0;
    double disc = 0.0;
};

inline LegQuadratic leg_quadratic(const LegConstraint& leg, const Pose& pose) noexcept {
    const BasisVector b = basis_vector(pose, 0.0);
    const std::size_t k = leg.rho_form();
    double others = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        if (j != k) {
            const double v = evaluate(leg.forms[j], b);
            others += v * v;
        }
    }
    return {evaluate(leg.forms[k], b), leg.r2 - others};
}

struct IkSolution {
    JointInput joints;
    std::array<double, 3> discriminant{};
    // Leg at a discriminant boundary (serial singularity); not an error.
    std::array<bool, 3> boundary{};
    bool reachable = true;
    int unreachable_leg = -1;
};

// Non-throwing IK. Discriminants within tol of zero are snapped to zero. When
// several legs are unreachable the most negative discriminant is reported.
inline IkSolution solve_ik(const ConstraintSystem& sys, const Pose& pose, const WorkingMode& wm) {
    IkSolution out;
    for (std::size_t i = 0; i < 3; ++i) {
        const LegQuadratic q = leg_quadratic(sys.legs[i], pose);
        out.discriminant[i] = q.disc;
        double disc = q.disc;
        if (disc < -kDiscriminantTol) {
            if (out.reachable ||
                disc < out.discriminant[static_cast<std::size_t>(out.unreachable_leg)]) {
                out.unreachable_leg = static_cast<int>(i);
            }
            out.reachable = false;
            continue;
        }
        if (std::abs(disc) <= kDiscriminantTol) {
            out.boundary[i] = true;
            disc = 0.0;
        }
        out.joints[i] = q.center + wm[i] * std::sqrt(disc);
    }
    return out;
}

inline JointInput inverse_kinematics(const ConstraintSystem& sys, const Pose& pose,
                                     const WorkingMode& wm) {
    const IkSolution s = solve_ik(sys, pose, wm);
    if (!s.reachable) {
        const auto leg = static_cast<std::size_t>(s.unreachable_leg);
        throw UnreachableError(s.unreachable_leg, s.discriminant[leg]);
    }
    return s.joints;
}

struct IkEntry {
    WorkingMode wm;
    JointInput joints;
};

// Every distinct IK solution. Legs at a discriminant boundary contribute
// only their '+' branch since both roots coincide.
inline std::vector<IkEntry> enumerate_ik(const ConstraintSystem& sys, const Pose& pose) {
    std::vector<IkEntry> out;
    const IkSolution probe = solve_ik(sys, pose, WorkingMode{});
    if (!probe.reachable) {
        return out;
    }
    for (const WorkingMode& wm : all_working_modes()) {
        bool duplicate = false;
        for (std::size_t i = 0; i < 3; ++i) {
            duplicate = duplicate || (probe.boundary[i] && wm[i] < 0);
        }
        if (duplicate) {
            continue;
        }
        out.push_back({wm, solve_ik(sys, pose, wm).joints});
    }
    return out;
}

// Branch signs recovered from a configuration: sign(rho - center) per leg.
inline WorkingMode working_mode_of(const ConstraintSystem& sys, const Pose& pose,
                                   const JointInput& joints) noexcept {
    WorkingMode wm;
    for (std::size_t i = 0; i < 3; ++i) {
        const LegQuadratic q = leg_quadratic(sys.legs[i], pose);
        wm.sigma[i] = joints[i] - q.center >= 0.0 ? 1 : -1;
    }
    return wm;
}

struct FkSolution {
    Pose pose;
    WorkingMode wm;
    double max_residual = 0.0;
};

using FkSolutionSet = std::vector<FkSolution>;

namespace detail {

// Sphere (or circle) described by an alpha-free leg in the mode's position
// coordinates: sum_j (q_j - center_j)^2 = radius^2.
struct LegSphere {
    std::array<double, 3> center{}; // indexed by Coord X, Y, Z
    double radius2 = 0.0;
};

inline LegSphere leg_sphere(const LegConstraint& leg, double rho) {
    LegSphere s;
    double constant = 0.0;
    std::array<bool, 3> seen{};
    for (const LinearForm& f : leg.forms) {
        int coord = -1;
        for (int j = 0; j < 3; ++j) {
            if (f[static_cast<std::size_t>(j)] != 0.0) {
                if (coord >= 0) {
                    throw ConfigurationError("leg form mixes position coordinates");
                }
                coord = j;
            }
        }
        const double offset = f[kRho] * rho + f[kOne];
        if (coord < 0) {
            constant += offset * offset;
            continue;
        }
        const auto c = static_cast<std::size_t>(coord);
        if (std::abs(std::abs(f[c]) - 1.0) > 0.0 || seen[c]) {
            throw ConfigurationError("alpha-free leg is not a sphere in the position coordinates");
        }
        seen[c] = true;
        s.center[c] = -offset / f[c];
    }
    s.radius2 = leg.r2 - constant;
    return s;
}

inline double angle_coeff_sum(const LegConstraint& leg, Basis a, Basis b) {
    double s = 0.0;
    for (const LinearForm& f : leg.forms) {
        s += f[a] * f[b];
    }
    return s;
}

inline bool same_pose(Mode m, const Pose& a, const Pose& b) {
    double d2 = 0.0;
    for (Coord c : mode_info(m).active) {
        const double d = c == Coord::Alpha ? angular_distance(a.alpha, b.alpha) : a.get(c) - b.get(c);
        d2 += d * d;
    }
    return std::sqrt(d2) <= kDedupTol;
}

inline bool fk_less(const FkSolution& a, const FkSolution& b) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (a.wm[i] != b.wm[i]) {
            return a.wm[i] > b.wm[i];
        }
    }
    if (a.pose.x != b.pose.x) return a.pose.x < b.pose.x;
    if (a.pose.y != b.pose.y) return a.pose.y < b.pose.y;
    if (a.pose.z != b.pose.z) return a.pose.z < b.pose.z;
    return a.pose.alpha < b.pose.alpha;
}

} // namespace detail

inline FkSolutionSet forward_kinematics(const ConstraintSystem& sys, const JointInput& joints) {
    using detail::LegSphere;
    const Mode mode = sys.mode;
    std::vector<Pose> candidates;

    std::vector<std::size_t> position_legs;
    std::vector<std::size_t> angle_legs;
    for (std::size_t i = 0; i < 3; ++i) {
        (sys.legs[i].depends_on_alpha() ? angle_legs : position_legs).push_back(i);
    }
    std::vector<std::size_t> pos_coords;
    for (Coord c : mode_info(mode).active) {
        if (c != Coord::Alpha) {
            pos_coords.push_back(static_cast<std::size_t>(c));
        }
    }

    if (angle_legs.empty()) {
        if (pos_coords.size() != 3) {
            throw ConfigurationError("alpha-free system needs three position coordinates");
        }
        std::array<Point3, 3> c{};
        std::array<double, 3> r{};
        for (std::size_t i = 0; i < 3; ++i) {
            const LegSphere s = detail::leg_sphere(sys.legs[i], joints[i]);
            if (s.radius2 < 0.0) {
                return {};
            }
            c[i] = {s.center[0], s.center[1], s.center[2]};
            r[i] = std::sqrt(s.radius2);
        }
        for (const Point3& p : trilaterate(c[0], c[1], c[2], r[0], r[1], r[2])) {
            candidates.push_back(Pose{p.x, p.y, p.z, 0.0});
        }
    } else {
        if (angle_legs.size() != 1 || position_legs.size() != 2 || pos_coords.size() != 2) {
            throw ConfigurationError("unsupported constraint structure for forward kinematics");
        }
        const std::size_t u = pos_coords[0];
        const std::size_t v = pos_coords[1];
        std::array<Point2, 2> c{};
        std::array<double, 2> r{};
        for (std::size_t k = 0; k < 2; ++k) {
            const std::size_t leg = position_legs[k];
            const LegSphere s = detail::leg_sphere(sys.legs[leg], joints[leg]);
            if (s.radius2 < 0.0) {
                return {};
            }
            c[k] = {s.center[u], s.center[v]};
            r[k] = std::sqrt(s.radius2);
        }
        std::vector<Point2> positions;
        try {
            positions = intersect_circles(c[0], r[0], c[1], r[1]);
        } catch (const ConcentricCirclesError&) {
            return {};
        }

        const std::size_t al = angle_legs[0];
        const LegConstraint& leg = sys.legs[al];
        const double cc = detail::angle_coeff_sum(leg, kCos, kCos);
        const double ss = detail::angle_coeff_sum(leg, kSin, kSin);
        const double cs = detail::angle_coeff_sum(leg, kCos, kSin);
        if (std::abs(cc - ss) > 1e-15 || std::abs(cs) > 1e-15) {
            throw ConfigurationError("orientation leg is not a linear trigonometric equation");
        }
        for (const Point2& q : positions) {
            Pose p;
            p.set(static_cast<Coord>(u), q.x);
            p.set(static_cast<Coord>(v), q.y);
            // Sum_k (p_k + c_k cos + s_k sin)^2 = r^2 with the cos/sin part of
            // constant norm reduces to a*cos + b*sin = d.
            const BasisVector b = basis_vector(p, joints[al]);
            double a = 0.0;
            double bs = 0.0;
            double pp = 0.0;
            for (const LinearForm& f : leg.forms) {
                double pk = 0.0;
                for (std::size_t j : {kX, kY, kZ, kRho, kOne}) {
                    pk += f[j] * b[j];
                }
                a += 2.0 * pk * f[kCos];
                bs += 2.0 * pk * f[kSin];
                pp += pk * pk;
            }
            const double d = leg.r2 - pp - cc;
            std::vector<double> angles;
            try {
                angles = solve_linear_trig(a, bs, d);
            } catch (const DegenerateEquationError&) {
                continue;
            } catch (const IndeterminateAngleError&) {
                // Orientation is free on a measure-zero set; not enumerable.
                continue;
            }
            for (double t : angles) {
                Pose full = p;
                full.alpha = t;
                candidates.push_back(full);
            }
        }
    }

    FkSolutionSet out;
    for (const Pose& cand : candidates) {
        const Pose p = canonical_pose(mode, cand);
        const double res = max_abs_residual(sys, p, joints);
        if (!(res < kFkResidualTol)) {
            continue;
        }
        bool dup = false;
        for (const FkSolution& s : out) {
            dup = dup || detail::same_pose(mode, s.pose, p);
        }
        if (!dup) {
            out.push_back({p, working_mode_of(sys, p, joints), res});
        }
    }
    std::sort(out.begin(), out.end(), detail::fk_less);
    return out;
}

} // namespace pipir
