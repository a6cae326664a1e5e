#pragma once

// Small closed-form geometric solvers used by forward kinematics.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pipir/constraint_model.hpp"
#include "pipir/errors.hpp"

namespace pipir {

inline constexpr double kTangencyTol = 1e-12;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

namespace detail {

inline Point3 sub(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 add(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 scale(const Point3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }
inline Point3 cross(const Point3& a, const Point3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

} // namespace detail

// Intersection of three spheres. Returns 0, 1 (tangent) or 2 points; the
// pair is ordered with the point on the +normal side of the center plane
// first, where normal = (c2 - c1) x (c3 - c1).
inline std::vector<Point3> trilaterate(const Point3& c1, const Point3& c2, const Point3& c3,
                                       double r1, double r2, double r3) {
    using namespace detail;
    const Point3 e12 = sub(c2, c1);
    const Point3 e13 = sub(c3, c1);
    const double d = norm(e12);
    const Point3 n = cross(e12, e13);
    const double nn = norm(n);
    const double scale_ref = std::max({d, norm(e13), 1.0});
    if (d <= kTangencyTol || nn <= kTangencyTol * scale_ref * scale_ref) {
        throw CollinearCentersError();
    }
    const Point3 ex = scale(e12, 1.0 / d);
    const double i = dot(ex, e13);
    const Point3 ey_raw = sub(e13, scale(ex, i));
    const double j = norm(ey_raw);
    const Point3 ey = scale(ey_raw, 1.0 / j);
    const Point3 ez = scale(n, 1.0 / nn);

    const double x = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    const double y = (r1 * r1 - r3 * r3 + i * i + j * j) / (2.0 * j) - (i / j) * x;
    double z2 = r1 * r1 - x * x - y * y;

    const Point3 base = add(c1, add(scale(ex, x), scale(ey, y)));
    if (z2 < -kTangencyTol) {
        return {};
    }
    if (std::abs(z2) <= kTangencyTol) {
        return {base};
    }
    const double z = std::sqrt(z2);
    return {add(base, scale(ez, z)), sub(base, scale(ez, z))};
}

// Intersection of two circles in the plane. Returns 0, 1 (tangent) or 2
// points, the one on the left of c1 -> c2 first.
inline std::vector<Point2> intersect_circles(const Point2& c1, double r1, const Point2& c2,
                                             double r2) {
    const double dx = c2.x - c1.x;
    const double dy = c2.y - c1.y;
    const double d = std::hypot(dx, dy);
    if (d <= kTangencyTol) {
        throw ConcentricCirclesError();
    }
    const double ux = dx / d;
    const double uy = dy / d;
    const bool external = std::abs(d - (r1 + r2)) <= kTangencyTol;
    const bool internal = std::abs(d - std::abs(r1 - r2)) <= kTangencyTol;
    if (external || internal) {
        // Internal tangency with r2 > r1 touches on the side away from c2.
        const double s = (!external && r2 > r1) ? -r1 : r1;
        return {Point2{c1.x + s * ux, c1.y + s * uy}};
    }
    const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    const double h2 = r1 * r1 - a * a;
    if (h2 < 0.0) {
        return {};
    }
    const double h = std::sqrt(h2);
    const Point2 m{c1.x + a * ux, c1.y + a * uy};
    return {Point2{m.x - h * uy, m.y + h * ux}, Point2{m.x + h * uy, m.y - h * ux}};
}

// Solves a*cos(t) + b*sin(t) = d for t in (-pi, pi], ascending.
inline std::vector<double> solve_linear_trig(double a, double b, double d) {
    const double r = std::hypot(a, b);
    if (r == 0.0) {
        if (d == 0.0) {
            throw IndeterminateAngleError();
        }
        throw DegenerateEquationError();
    }
    const double t0 = std::atan2(b, a);
    if (std::abs(std::abs(d) - r) <= kTangencyTol) {
        return {normalize_angle(d > 0.0 ? t0 : t0 + std::numbers::pi)};
    }
    if (std::abs(d) > r) {
        return {};
    }
    const double phi = std::acos(d / r);
    std::vector<double> out{normalize_angle(t0 - phi), normalize_angle(t0 + phi)};
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace pipir
