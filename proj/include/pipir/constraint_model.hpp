#pragma once

// Geometry and per-operation-mode constraint systems of the 3-PRPiR robot.
//
// Every leg constraint is stored as three linear forms over the basis
// (x, y, z, cos(alpha), sin(alpha), rho, 1). The leg is satisfied when the
// sum of the squared forms equals r^2. IK, Jacobians and FK structure
// detection are all derived from these coefficients.

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "pipir/errors.hpp"

namespace pipir {

// Link lengths in normalized units.
struct DesignParams {
    double d1 = 0.5;
    double d2 = 1.0;
    double d3 = 0.1;
    double d4 = 0.1;
    double l = 1.0;

    bool valid() const noexcept {
        auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
        return pos(d1) && pos(d2) && pos(d3) && pos(d4) && pos(l);
    }
};

enum class Mode { One = 1, Two = 2, Three = 3, Four = 4 };

// Pose coordinates. Alpha is the platform rotation angle.
enum class Coord { X, Y, Z, Alpha };

enum class RotationAxis { None, X, Z };

struct ModeInfo {
    Mode mode;
    std::array<Coord, 3> active;
    RotationAxis axis;
    std::string_view locked;
    std::string_view released;
};

// Locked/released joints and active coordinates per operation mode.
inline const ModeInfo& mode_info(Mode m) {
    static const std::array<ModeInfo, 4> table{{
        {Mode::One, {Coord::X, Coord::Y, Coord::Z}, RotationAxis::None, "P1,P2", "R1,R2,R3"},
        {Mode::Two, {Coord::X, Coord::Y, Coord::Alpha}, RotationAxis::Z, "R1,R2,P2", "R3,P1"},
        {Mode::Three, {Coord::X, Coord::Y, Coord::Alpha}, RotationAxis::X, "R1,R2,P1", "R3,P2"},
        {Mode::Four, {Coord::Y, Coord::Z, Coord::Alpha}, RotationAxis::Z, "R3,P2", "R1,R2,P1"},
    }};
    const int idx = static_cast<int>(m) - 1;
    if (idx < 0 || idx > 3) {
        throw ConfigurationError("unknown operation mode " + std::to_string(static_cast<int>(m)));
    }
    return table[static_cast<std::size_t>(idx)];
}

inline Mode mode_from_int(int id) {
    if (id < 1 || id > 4) {
        throw ConfigurationError("unknown operation mode " + std::to_string(id));
    }
    return static_cast<Mode>(id);
}

inline int mode_id(Mode m) noexcept { return static_cast<int>(m); }

inline bool is_active(Mode m, Coord c) {
    for (Coord a : mode_info(m).active) {
        if (a == c) {
            return true;
        }
    }
    return false;
}

// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(a, two_pi);
    if (r <= -std::numbers::pi) {
        r += two_pi;
    }
    return r;
}

inline double angular_distance(double a, double b) noexcept {
    return std::abs(normalize_angle(a - b));
}

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double alpha = 0.0;

    double get(Coord c) const noexcept {
        switch (c) {
        case Coord::X: return x;
        case Coord::Y: return y;
        case Coord::Z: return z;
        case Coord::Alpha: return alpha;
        }
        return 0.0;
    }

    void set(Coord c, double v) noexcept {
        switch (c) {
        case Coord::X: x = v; break;
        case Coord::Y: y = v; break;
        case Coord::Z: z = v; break;
        case Coord::Alpha: alpha = v; break;
        }
    }
};

// Zeroes the coordinates a mode does not use and wraps alpha.
inline Pose canonical_pose(Mode m, Pose p) {
    for (Coord c : {Coord::X, Coord::Y, Coord::Z, Coord::Alpha}) {
        if (!is_active(m, c)) {
            p.set(c, 0.0);
        }
    }
    p.alpha = normalize_angle(p.alpha);
    return p;
}

struct JointInput {
    std::array<double, 3> rho{};

    double operator[](std::size_t i) const noexcept { return rho[i]; }
    double& operator[](std::size_t i) noexcept { return rho[i]; }
};

// Column layout of a linear form.
enum Basis : std::size_t { kX = 0, kY, kZ, kCos, kSin, kRho, kOne, kBasisSize };

using LinearForm = std::array<double, kBasisSize>;
using BasisVector = std::array<double, kBasisSize>;

inline BasisVector basis_vector(const Pose& p, double rho) noexcept {
    return {p.x, p.y, p.z, std::cos(p.alpha), std::sin(p.alpha), rho, 1.0};
}

inline double evaluate(const LinearForm& f, const BasisVector& b) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < kBasisSize; ++j) {
        s += f[j] * b[j];
    }
    return s;
}

struct LegConstraint {
    std::array<LinearForm, 3> forms{};
    double r2 = 1.0;

    // Index of the unique form that carries rho (coefficient -1).
    std::size_t rho_form() const noexcept {
        for (std::size_t k = 0; k < 3; ++k) {
            if (forms[k][kRho] != 0.0) {
                return k;
            }
        }
        return 0;
    }

    bool depends_on_alpha() const noexcept {
        for (const auto& f : forms) {
            if (f[kCos] != 0.0 || f[kSin] != 0.0) {
                return true;
            }
        }
        return false;
    }

    double residual(const Pose& p, double rho) const noexcept {
        const BasisVector b = basis_vector(p, rho);
        double s = 0.0;
        for (const auto& f : forms) {
            const double v = evaluate(f, b);
            s += v * v;
        }
        return s - r2;
    }
};

enum class Preset { Consistent, PaperIkMode4 };

inline std::string_view preset_name(Preset p) noexcept {
    return p == Preset::Consistent ? "consistent" : "paper-ik-mode4";
}

inline Preset preset_from_string(std::string_view s) {
    if (s == "consistent") {
        return Preset::Consistent;
    }
    if (s == "paper-ik-mode4") {
        return Preset::PaperIkMode4;
    }
    throw ConfigurationError("unknown preset '" + std::string(s) + "'");
}

struct ConstraintSystem {
    Mode mode = Mode::One;
    std::array<LegConstraint, 3> legs{};
    DesignParams params{};
    Preset preset = Preset::Consistent;
};

namespace detail {

// Builds a linear form from (basis index, coefficient) pairs.
inline LinearForm form(std::initializer_list<std::pair<Basis, double>> terms) {
    LinearForm f{};
    for (const auto& [k, v] : terms) {
        f[k] += v;
    }
    return f;
}

} // namespace detail

inline ConstraintSystem build_system(Mode mode, const DesignParams& params = {},
                                     Preset preset = Preset::Consistent) {
    if (!params.valid()) {
        throw ConfigurationError("design parameters must be finite and strictly positive");
    }
    using detail::form;
    const double d1 = params.d1;
    const double d2 = params.d2;
    const double d3 = params.d3;
    const double d4 = params.d4;
    const double l2 = params.l * params.l;
    // Offset of legs 1/2 along x and height of the leg-3 sphere center.
    const double a = d1 / 2.0 - d3;
    const double h = d2 - 2.0 * d4;

    ConstraintSystem sys;
    sys.mode = mode;
    sys.params = params;
    sys.preset = preset;
    auto& L = sys.legs;

    switch (mode) {
    case Mode::One:
        L[0] = {{form({{kX, 1}, {kOne, a}}), form({{kY, 1}, {kRho, -1}}), form({{kZ, 1}})}, l2};
        L[1] = {{form({{kX, 1}, {kOne, -a}}), form({{kY, 1}, {kRho, -1}}), form({{kZ, 1}})}, l2};
        L[2] = {{form({{kX, 1}}), form({{kY, 1}, {kRho, -1}}), form({{kZ, 1}, {kOne, -h}})}, l2};
        break;
    case Mode::Two:
        L[0] = {{form({{kX, 1}, {kCos, -d3}, {kOne, d1 / 2.0}}),
                 form({{kY, 1}, {kSin, -d3}, {kRho, -1}}), LinearForm{}},
                l2};
        L[1] = {{form({{kX, 1}, {kOne, -a}}), form({{kY, 1}, {kRho, -1}}), LinearForm{}}, l2};
        L[2] = {{form({{kX, 1}}), form({{kY, 1}, {kRho, -1}}), LinearForm{}}, l2 - h * h};
        break;
    case Mode::Three:
        L[0] = {{form({{kX, 1}, {kOne, a}}), form({{kY, 1}, {kRho, -1}}), LinearForm{}}, l2};
        L[1] = {{form({{kX, 1}, {kOne, -a}}), form({{kY, 1}, {kRho, -1}}), LinearForm{}}, l2};
        L[2] = {{form({{kX, 1}}), form({{kY, 1}, {kSin, d4}, {kRho, -1}}),
                 form({{kCos, d4}, {kOne, -(d2 - d4)}})},
                l2};
        break;
    case Mode::Four:
        if (preset == Preset::Consistent) {
            L[0] = {{form({{kCos, -d3}, {kOne, d1 / 2.0}}),
                     form({{kY, 1}, {kSin, -d3}, {kRho, -1}}), form({{kZ, 1}})},
                    l2};
            L[1] = {{LinearForm{}, form({{kY, 1}, {kRho, -1}}), form({{kZ, 1}})}, l2 - a * a};
            L[2] = {{LinearForm{}, form({{kY, 1}, {kRho, -1}}), form({{kZ, 1}, {kOne, -h}})}, l2};
        } else {
            // Constants that reproduce the printed mode-4 IK radicands.
            L[0] = {{form({{kCos, -d3}, {kOne, d1}}), form({{kY, 1}, {kSin, -d3}, {kRho, -1}}),
                     form({{kZ, 1}})},
                    l2};
            L[1] = {{LinearForm{}, form({{kY, 1}, {kRho, -1}}), form({{kZ, 1}})}, l2 - d3 * d3};
            L[2] = {{LinearForm{}, form({{kY, 1}, {kRho, -1}}), form({{kZ, 1}, {kOne, -h}})},
                    l2 - d1 * d1 / 4.0};
        }
        break;
    default:
        throw ConfigurationError("unknown operation mode " + std::to_string(mode_id(mode)));
    }
    return sys;
}

inline std::array<double, 3> residual(const ConstraintSystem& sys, const Pose& pose,
                                      const JointInput& joints) noexcept {
    std::array<double, 3> r{};
    for (std::size_t i = 0; i < 3; ++i) {
        r[i] = sys.legs[i].residual(pose, joints[i]);
    }
    return r;
}

inline double max_abs_residual(const ConstraintSystem& sys, const Pose& pose,
                               const JointInput& joints) noexcept {
    double m = 0.0;
    for (double v : residual(sys, pose, joints)) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Joint centers, for rendering and diagnostics. The constraint forms are
// not derived from these points.
struct PointSet {
    std::array<Point3, 3> A{};
    std::array<Point3, 3> B{};
    std::array<Point3, 3> C{};
    Point3 P{};
};

inline PointSet leg_points(Mode mode, const Pose& pose, const JointInput& joints,
                           const DesignParams& params = {}) {
    const double d1 = params.d1;
    const double d2 = params.d2;
    const double d3 = params.d3;
    const double d4 = params.d4;
    const double x = pose.x;
    const double y = pose.y;
    const double z = pose.z;
    const double c = std::cos(pose.alpha);
    const double s = std::sin(pose.alpha);

    PointSet ps;
    ps.A = {Point3{-d1 / 2.0, 0.0, 0.0}, Point3{d1 / 2.0 - d3, 0.0, 0.0}, Point3{0.0, 0.0, d2 - d4}};
    for (std::size_t i = 0; i < 3; ++i) {
        ps.B[i] = ps.A[i];
        ps.B[i].y += joints[i];
    }
    switch (mode) {
    case Mode::One:
        ps.C = {Point3{x - d3, y, z}, Point3{x + d3, y, z}, Point3{x, y, z + d4}};
        ps.P = {x, y, z};
        break;
    case Mode::Two:
        ps.C = {Point3{x - d3 * c, y - d3 * s, 0.0}, Point3{x + d3 * c, y + d3 * s, 0.0},
                Point3{x, y, d4}};
        ps.P = {x, y, 0.0};
        break;
    case Mode::Three:
        ps.C = {Point3{x - d3, y, 0.0}, Point3{x + d3, y, 0.0}, Point3{x, y + d4 * s, d4 * c}};
        ps.P = {x, y, 0.0};
        break;
    case Mode::Four:
        ps.C = {Point3{-d3 * c, y - d3 * s, z}, Point3{d3 * c, y + d3 * s, z},
                Point3{0.0, y, z + d4}};
        ps.P = {0.0, y, z};
        break;
    default:
        throw ConfigurationError("unknown operation mode " + std::to_string(mode_id(mode)));
    }
    return ps;
}

} // namespace pipir
