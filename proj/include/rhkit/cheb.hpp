#pragma once

#include <functional>
#include <vector>

#include "rhkit/types.hpp"

namespace rhkit {

// Affine map between an interval/segment (a,b) and the reference interval (-1,1).
// Endpoints may be complex (contour legs); forward(z) = (2z-a-b)/(b-a).
struct IntervalMap {
    cx a{-1.0}, b{1.0};

    IntervalMap() = default;
    IntervalMap(cx a_, cx b_) : a(a_), b(b_) {
        if (a == b) throw std::invalid_argument("IntervalMap: endpoints coincide");
    }

    cx forward(cx z) const { return (2.0 * z - a - b) / (b - a); }
    cx inverse(cx t) const { return 0.5 * ((b - a) * t + a + b); }
    // d forward / dz
    cx deriv() const { return 2.0 / (b - a); }
    double length() const { return std::abs(b - a); }
    // orientation angle of the segment, arg(b - a)
    double angle() const { return std::arg(b - a); }
};

// Chebyshev-T expansion sum_k c_k T_k(forward(z)) attached to an interval map.
struct ChebSeries {
    IntervalMap map;
    std::vector<cx> coeffs;

    cx eval(cx z) const;
    ChebSeries derivative() const;
};

// 2x2-matrix-valued Chebyshev series; one shared map, matrix coefficients.
struct MatChebSeries {
    IntervalMap map;
    std::vector<Mat2> coeffs;

    Mat2 eval(cx z) const;
    // value of the series at t = +1 / -1 (endpoint values)
    Mat2 endpoint_value(bool right) const;
};

// Mapped Chebyshev points of the second kind (extrema grid, endpoints included):
// M^{-1}(cos(pi(1 - k/(m-1)))), k = 0..m-1; first point is the left endpoint.
std::vector<cx> cheb_points(int m, const IntervalMap& map);

// Interpolation: samples at cheb_points(m, map) -> coefficients (type-I DCT).
ChebSeries cheb_transform(const std::vector<cx>& samples, const IntervalMap& map);
MatChebSeries cheb_transform(const std::vector<Mat2>& samples, const IntervalMap& map);

// Row-major value->coefficient matrix D with c_k = sum_l D[k][l] f(x_l).
std::vector<std::vector<double>> dct_matrix(int m);

// Clenshaw evaluation of a raw coefficient list at reference coordinate t.
cx clenshaw(const std::vector<cx>& c, cx t);

// Spectral derivative on the reference interval (no chain rule factor).
std::vector<cx> cheb_derivative_coeffs(const std::vector<cx>& c);

// integral of T_k over (-1,1): 2/(1-k^2) for even k, 0 for odd k
double chebT_integral(int k);

// Adaptive sampling of f on (a,b): doubles m until the two trailing coefficients
// drop below 1e-14 relative to the largest, cap 2048.
ChebSeries cheb_fit_adaptive(const std::function<cx(cx)>& f, const IntervalMap& map,
                             double rel_tol = 1e-14, int max_m = 2048);

}  // namespace rhkit
