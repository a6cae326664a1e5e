#pragma once

// Jacobians of the constraint residuals and serial/parallel singularity
// classification.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "pipir/constraint_model.hpp"
#include "pipir/errors.hpp"

namespace pipir {

inline constexpr double kManifoldTol = 1e-6;

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline double det3(const Matrix3& m) noexcept {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// A: d(residual)/d(active pose coordinates); B: d(residual)/d(rho), diagonal.
// Along any constraint-preserving motion A * pose_rate + B * joint_rate = 0.
struct JacobianPair {
    Matrix3 A{};
    std::array<double, 3> B{};

    double detA() const noexcept { return det3(A); }
    double detB() const noexcept { return B[0] * B[1] * B[2]; }
};

// Analytic Jacobians without the on-manifold check.
inline JacobianPair jacobians_unchecked(const ConstraintSystem& sys, const Pose& pose,
                                        const JointInput& joints) noexcept {
    JacobianPair jp;
    const auto& active = mode_info(sys.mode).active;
    const double c = std::cos(pose.alpha);
    const double s = std::sin(pose.alpha);
    for (std::size_t i = 0; i < 3; ++i) {
        const LegConstraint& leg = sys.legs[i];
        const BasisVector b = basis_vector(pose, joints[i]);
        std::array<double, 3> value{};
        for (std::size_t k = 0; k < 3; ++k) {
            value[k] = evaluate(leg.forms[k], b);
        }
        for (std::size_t col = 0; col < 3; ++col) {
            double g = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                const LinearForm& f = leg.forms[k];
                double df = 0.0;
                switch (active[col]) {
                case Coord::X: df = f[kX]; break;
                case Coord::Y: df = f[kY]; break;
                case Coord::Z: df = f[kZ]; break;
                case Coord::Alpha: df = -f[kCos] * s + f[kSin] * c; break;
                }
                g += value[k] * df;
            }
            jp.A[i][col] = 2.0 * g;
        }
        double g = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            g += value[k] * leg.forms[k][kRho];
        }
        jp.B[i] = 2.0 * g;
    }
    return jp;
}

inline JacobianPair jacobians(const ConstraintSystem& sys, const Pose& pose,
                              const JointInput& joints) {
    const double res = max_abs_residual(sys, pose, joints);
    if (!(res < kManifoldTol)) {
        throw OffManifoldError(res);
    }
    return jacobians_unchecked(sys, pose, joints);
}

struct Tolerances {
    double serial = 1e-9;   // absolute, on |B_ii|
    double parallel = 1e-9; // relative to the product of A's row norms
};

enum class SingularityKind { Regular, Serial, Parallel, SerialParallel };

inline std::string to_string(SingularityKind k) {
    switch (k) {
    case SingularityKind::Regular: return "regular";
    case SingularityKind::Serial: return "serial";
    case SingularityKind::Parallel: return "parallel";
    case SingularityKind::SerialParallel: return "serial+parallel";
    }
    return "unknown";
}

// Printed serial condition for one leg, e.g. "-10*y + sin(alpha) + 10*rho1 = 0".
inline std::string serial_condition_text(Mode mode, std::size_t leg) {
    const std::string r = "rho" + std::to_string(leg + 1);
    if ((mode == Mode::Two || mode == Mode::Four) && leg == 0) {
        return "-10*y + sin(alpha) + 10*rho1 = 0";
    }
    if (mode == Mode::Three && leg == 2) {
        return "-10*y - sin(alpha) + 10*rho3 = 0";
    }
    return r + " - y = 0";
}

// Printed serial conditions evaluated at a configuration; each is a nonzero
// constant multiple of B_ii.
inline std::array<double, 3> serial_condition_values(Mode mode, const Pose& pose,
                                                     const JointInput& joints) {
    std::array<double, 3> v{};
    const double s = std::sin(pose.alpha);
    for (std::size_t i = 0; i < 3; ++i) {
        v[i] = joints[i] - pose.y;
    }
    if (mode == Mode::Two || mode == Mode::Four) {
        v[0] = -10.0 * pose.y + s + 10.0 * joints[0];
    } else if (mode == Mode::Three) {
        v[2] = -10.0 * pose.y - s + 10.0 * joints[2];
    }
    return v;
}

struct SingularityVerdict {
    SingularityKind kind = SingularityKind::Regular;
    std::vector<int> serial_legs;
    std::vector<std::string> serial_conditions;
    double detA = 0.0;
    double detA_scale = 1.0;
    std::array<double, 3> B{};
};

// Product of the row norms of A, the scale for the relative parallel test.
inline double row_norm_product(const Matrix3& A) noexcept {
    double p = 1.0;
    for (const auto& row : A) {
        p *= std::sqrt(row[0] * row[0] + row[1] * row[1] + row[2] * row[2]);
    }
    return p;
}

inline bool is_parallel_singular(const JacobianPair& jp, double tol) noexcept {
    return std::abs(jp.detA()) <= tol * row_norm_product(jp.A);
}

inline SingularityVerdict classify(const ConstraintSystem& sys, const Pose& pose,
                                   const JointInput& joints, const Tolerances& tol = {}) {
    const JacobianPair jp = jacobians(sys, pose, joints);
    SingularityVerdict v;
    v.detA = jp.detA();
    v.detA_scale = row_norm_product(jp.A);
    v.B = jp.B;
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(jp.B[i]) <= tol.serial) {
            v.serial_legs.push_back(static_cast<int>(i) + 1);
            v.serial_conditions.push_back(serial_condition_text(sys.mode, i));
        }
    }
    const bool serial = !v.serial_legs.empty();
    const bool parallel = std::abs(v.detA) <= tol.parallel * v.detA_scale;
    if (serial && parallel) {
        v.kind = SingularityKind::SerialParallel;
    } else if (serial) {
        v.kind = SingularityKind::Serial;
    } else if (parallel) {
        v.kind = SingularityKind::Parallel;
    }
    return v;
}

// Parallel-singularity factors at default design parameters. Modes 2-4
// return the two factors of det A; mode 1 returns det A itself. Mode 2's
// first factor uses 3*(rho3 - y), the form that follows from the
// constraint equations.
inline std::vector<double> parallel_factor_values(const ConstraintSystem& sys, const Pose& pose,
                                                  const JointInput& joints) {
    const double x = pose.x;
    const double y = pose.y;
    const double z = pose.z;
    const double c = std::cos(pose.alpha);
    const double s = std::sin(pose.alpha);
    const double r1 = joints[0];
    const double r2 = joints[1];
    const double r3 = joints[2];
    switch (sys.mode) {
    case Mode::One:
        return {jacobians_unchecked(sys, pose, joints).detA()};
    case Mode::Two:
        return {20.0 * x * (r2 - r3) + 3.0 * (r3 - y), -4.0 * x * s - 4.0 * c * r1 + 4.0 * y * c - s};
    case Mode::Three:
        return {20.0 * r1 * x - 20.0 * r2 * x - 3.0 * r1 - 3.0 * r2 + 6.0 * y,
                -10.0 * c * r3 + 10.0 * y * c + 9.0 * s};
    case Mode::Four:
        return {5.0 * r2 * z - 5.0 * z * r3 - 4.0 * r2 + 4.0 * y, -4.0 * c * r1 + 4.0 * y * c - s};
    }
    throw ConfigurationError("unknown operation mode");
}

// det A = ratio * factor1 * factor2 at default parameters (columns ordered
// as the mode's active coordinates).
inline double factor_product_ratio(Mode mode) {
    switch (mode) {
    case Mode::Two: return -1.0 / 100.0;
    case Mode::Three: return 1.0 / 250.0;
    case Mode::Four: return 1.0 / 25.0;
    default: throw ConfigurationError("mode 1 determinant does not factor");
    }
}

} // namespace pipir
