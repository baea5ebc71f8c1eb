#pragma once

// Small fixed-size linear algebra value types shared across the library.

#include <cmath>
#include <cstdio>
#include <string>

namespace monofem {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// Symmetric 2x2 matrix stored as its three independent entries.
struct Sym2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a12; }
    double trace() const { return a11 + a22; }
    bool spd() const { return a11 > 0.0 && det() > 0.0; }
    Sym2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, a11 / d};
    }
};

inline Vec2 operator*(const Sym2& m, Vec2 v) {
    return {m.a11 * v.x + m.a12 * v.y, m.a12 * v.x + m.a22 * v.y};
}

/// u' M v for symmetric M.
inline double quad_form(const Sym2& m, Vec2 u, Vec2 v) { return dot(u, m * v); }

/// General 2x2 matrix; columns act on vectors from the left.
struct Mat2 {
    double m00 = 0.0, m01 = 0.0;
    double m10 = 0.0, m11 = 0.0;

    double det() const { return m00 * m11 - m01 * m10; }
    Mat2 inverse() const {
        const double d = det();
        return {m11 / d, -m01 / d, -m10 / d, m00 / d};
    }
    Vec2 row(int i) const { return i == 0 ? Vec2{m00, m01} : Vec2{m10, m11}; }
};

inline Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.m00 * v.x + m.m01 * v.y, m.m10 * v.x + m.m11 * v.y};
}

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool degenerate() const { return !(x1 > x0) || !(y1 > y0); }
};

/// Shortest decimal text that round-trips the exact double value.
inline std::string format_exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Six significant digits, for human-facing tables.
inline std::string format_sig6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace monofem
