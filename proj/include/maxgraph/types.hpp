#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace maxgraph {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Coordinate index on the planar domain.
enum class Var : int { x1 = 0, x2 = 1 };

constexpr int index(Var v) { return static_cast<int>(v); }

/// Default centered finite-difference step for first derivatives.
inline constexpr double kFdStep = 1e-5;

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point outside the mathematical or stencil-safe domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Lorentzian operation attempted at a point where |Du|^2 >= 1 (or too close to it).
class NonSpacelikeError : public Error {
public:
    using Error::Error;
};

/// Invalid user input (scene files, option values, argument ranges).
class ValidationError : public Error {
public:
    using Error::Error;
};

std::string format_point(const Point& p);

}  // namespace maxgraph
