#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace poncelet {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

//! Plain 2D vector; doubles as a point.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm_sq(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm_sq(a)); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

//! Rotation by +90 degrees.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

inline Vec2 normalized(Vec2 a) {
    const double len = norm(a);
    return {a.x / len, a.y / len};
}

//! Reduce an angle to [0, 2pi).
inline double wrap_two_pi(double t) {
    double r = std::fmod(t, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

//! Counterclockwise parameter advance from one boundary angle to another, in (0, 2pi].
inline double param_advance(double from, double to) {
    const double d = wrap_two_pi(to - from);
    return d == 0.0 ? kTwoPi : d;
}

//! Inner products of unit vectors overshoot [-1,1] by a few ulp; clamp before acos.
inline double clamp_unit(double c) { return std::clamp(c, -1.0, 1.0); }

//! Unsigned angle between two vectors, in [0, pi].
inline double angle_between(Vec2 a, Vec2 b) {
    return std::acos(clamp_unit(dot(a, b) / (norm(a) * norm(b))));
}

} // namespace poncelet
