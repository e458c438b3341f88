#pragma once

#include <cmath>

namespace vblob {

/// 2D point / velocity in dimensionless units.
struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double a, double b) : x1(a), x2(b) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x1 + o.x1, x2 + o.x2}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x1 - o.x1, x2 - o.x2}; }
    constexpr Vec2 operator-() const { return {-x1, -x2}; }
    constexpr Vec2 operator*(double c) const { return {c * x1, c * x2}; }
    constexpr Vec2 operator/(double c) const { return {x1 / c, x2 / c}; }
    Vec2& operator+=(const Vec2& o) { x1 += o.x1; x2 += o.x2; return *this; }
    Vec2& operator-=(const Vec2& o) { x1 -= o.x1; x2 -= o.x2; return *this; }
    Vec2& operator*=(double c) { x1 *= c; x2 *= c; return *this; }

    /// (x1,x2)^perp = (-x2,x1).
    constexpr Vec2 perp() const { return {-x2, x1}; }

    constexpr double dot(const Vec2& o) const { return x1 * o.x1 + x2 * o.x2; }
    constexpr double norm2() const { return x1 * x1 + x2 * x2; }
    double norm() const { return std::sqrt(norm2()); }

    bool finite() const { return std::isfinite(x1) && std::isfinite(x2); }

    constexpr bool operator==(const Vec2&) const = default;
};

inline constexpr Vec2 operator*(double c, const Vec2& v) { return v * c; }

}  // namespace vblob
