#pragma once

#include <stdexcept>
#include <string>

namespace pipir {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Raised by inverse_kinematics when a leg's discriminant is negative.
class UnreachableError : public Error {
public:
    UnreachableError(int leg, double discriminant)
        : Error("leg " + std::to_string(leg + 1) + " unreachable (discriminant " +
                std::to_string(discriminant) + ")"),
          leg_(leg), discriminant_(discriminant) {}

    int leg() const noexcept { return leg_; }
    double discriminant() const noexcept { return discriminant_; }

private:
    int leg_;
    double discriminant_;
};

class CollinearCentersError : public Error {
public:
    CollinearCentersError() : Error("sphere centers are collinear") {}
};

class ConcentricCirclesError : public Error {
public:
    ConcentricCirclesError() : Error("circle centers coincide") {}
};

// a = b = 0 with d != 0: a*cos + b*sin = d has no solution.
class DegenerateEquationError : public Error {
public:
    DegenerateEquationError() : Error("degenerate trigonometric equation (a = b = 0, d != 0)") {}
};

// a = b = d = 0: every angle solves the equation.
class IndeterminateAngleError : public Error {
public:
    IndeterminateAngleError() : Error("indeterminate angle (a = b = d = 0)") {}
};

class OffManifoldError : public Error {
public:
    explicit OffManifoldError(double residual)
        : Error("configuration is off the constraint manifold (|residual| = " +
                std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class NoSignChangeError : public Error {
public:
    NoSignChangeError() : Error("function does not change sign over the bracket") {}
};

} // namespace pipir
