#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rhkit {

using cx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline const cx I_unit{0.0, 1.0};

// 2x2 complex matrix, the working type for all Riemann-Hilbert data.
struct Mat2 {
    cx a11{0.0}, a12{0.0}, a21{0.0}, a22{0.0};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 diag(cx d1, cx d2) { return {d1, 0.0, 0.0, d2}; }

    cx det() const { return a11 * a22 - a12 * a21; }

    Mat2 inverse() const {
        cx d = det();
        if (std::abs(d) == 0.0) throw std::runtime_error("Mat2: singular matrix");
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(cx s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2& operator+=(const Mat2& o) { a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22; return *this; }

    // max-abs entry norm
    double norm() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)), std::max(std::abs(a21), std::abs(a22)));
    }

    cx& at(int r, int c) {
        if (r == 0) return c == 0 ? a11 : a12;
        return c == 0 ? a21 : a22;
    }
    cx at(int r, int c) const {
        if (r == 0) return c == 0 ? a11 : a12;
        return c == 0 ? a21 : a22;
    }
};

inline Mat2 operator*(cx s, const Mat2& m) { return m * s; }
inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// principal-range angle reduction to (-pi, pi]
inline double reduce_angle(double t) {
    double r = std::remainder(t, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

}  // namespace rhkit
