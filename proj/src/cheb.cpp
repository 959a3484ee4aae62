#include "rhkit/cheb.hpp"

#include <algorithm>

namespace rhkit {

std::vector<cx> cheb_points(int m, const IntervalMap& map) {
    if (m < 2) throw std::invalid_argument("cheb_points: need m >= 2");
    std::vector<cx> pts(m);
    for (int k = 0; k < m; ++k) {
        double t = std::cos(pi * (1.0 - double(k) / double(m - 1)));
        if (k == 0) t = -1.0;
        if (k == m - 1) t = 1.0;
        pts[k] = map.inverse(t);
    }
    // pin endpoints exactly
    pts[0] = map.a;
    pts[m - 1] = map.b;
    return pts;
}

std::vector<std::vector<double>> dct_matrix(int m) {
    // nodes x_l = cos(pi (m-1-l)/(m-1)); coefficients of the interpolant:
    // c_k = (p_k/n) [ f_0/2 * cos(k pi) ... ] -- type-I DCT with the first/last
    // samples halved and c_0, c_n halved once more.
    int n = m - 1;
    std::vector<std::vector<double>> D(m, std::vector<double>(m, 0.0));
    for (int k = 0; k <= n; ++k) {
        double pk = (k == 0 || k == n) ? 1.0 : 2.0;
        for (int l = 0; l <= n; ++l) {
            int r = n - l;  // sample l sits at cos(pi r / n)
            double ql = (r == 0 || r == n) ? 0.5 : 1.0;
            D[k][l] = (pk / n) * ql * std::cos(pi * double(k) * double(r) / double(n));
        }
    }
    return D;
}

ChebSeries cheb_transform(const std::vector<cx>& samples, const IntervalMap& map) {
    int m = int(samples.size());
    if (m < 2) throw std::invalid_argument("cheb_transform: need >= 2 samples");
    auto D = dct_matrix(m);
    ChebSeries s;
    s.map = map;
    s.coeffs.assign(m, cx{});
    for (int k = 0; k < m; ++k) {
        cx acc{};
        for (int l = 0; l < m; ++l) acc += D[k][l] * samples[l];
        s.coeffs[k] = acc;
    }
    return s;
}

MatChebSeries cheb_transform(const std::vector<Mat2>& samples, const IntervalMap& map) {
    int m = int(samples.size());
    if (m < 2) throw std::invalid_argument("cheb_transform: need >= 2 samples");
    auto D = dct_matrix(m);
    MatChebSeries s;
    s.map = map;
    s.coeffs.assign(m, Mat2::zero());
    for (int k = 0; k < m; ++k) {
        Mat2 acc;
        for (int l = 0; l < m; ++l) acc += D[k][l] * samples[l];
        s.coeffs[k] = acc;
    }
    return s;
}

cx clenshaw(const std::vector<cx>& c, cx t) {
    if (c.empty()) return {};
    cx b1{}, b2{};
    for (int k = int(c.size()) - 1; k >= 1; --k) {
        cx b0 = 2.0 * t * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

cx ChebSeries::eval(cx z) const { return clenshaw(coeffs, map.forward(z)); }

Mat2 MatChebSeries::eval(cx z) const {
    cx t = map.forward(z);
    Mat2 b1, b2;
    for (int k = int(coeffs.size()) - 1; k >= 1; --k) {
        Mat2 b0 = 2.0 * t * b1 - b2 + coeffs[k];
        b2 = b1;
        b1 = b0;
    }
    if (coeffs.empty()) return Mat2::zero();
    return t * b1 - b2 + coeffs[0];
}

Mat2 MatChebSeries::endpoint_value(bool right) const {
    // T_k(1) = 1, T_k(-1) = (-1)^k
    Mat2 acc;
    for (size_t k = 0; k < coeffs.size(); ++k) {
        double w = right ? 1.0 : (k % 2 == 0 ? 1.0 : -1.0);
        acc += w * coeffs[k];
    }
    return acc;
}

std::vector<cx> cheb_derivative_coeffs(const std::vector<cx>& c) {
    // d_k = d_{k+2} + 2(k+1) c_{k+1}, descending; d_0 halved.
    int n = int(c.size()) - 1;
    if (n <= 0) return {cx{}};
    std::vector<cx> d(n, cx{});
    for (int k = n - 1; k >= 0; --k) {
        cx next = (k + 2 <= n - 1) ? d[k + 2] : cx{};
        d[k] = next + 2.0 * double(k + 1) * c[k + 1];
    }
    d[0] *= 0.5;
    return d;
}

ChebSeries ChebSeries::derivative() const {
    ChebSeries d;
    d.map = map;
    d.coeffs = cheb_derivative_coeffs(coeffs);
    cx f = map.deriv();
    for (auto& c : d.coeffs) c *= f;
    return d;
}

double chebT_integral(int k) {
    if (k % 2 == 1) return 0.0;
    return 2.0 / (1.0 - double(k) * double(k));
}

ChebSeries cheb_fit_adaptive(const std::function<cx(cx)>& f, const IntervalMap& map,
                             double rel_tol, int max_m) {
    int m = 17;
    ChebSeries s;
    while (true) {
        auto pts = cheb_points(m, map);
        std::vector<cx> vals(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
        s = cheb_transform(vals, map);
        double biggest = 0.0;
        for (auto& c : s.coeffs) biggest = std::max(biggest, std::abs(c));
        double tail = std::max(std::abs(s.coeffs[m - 1]), std::abs(s.coeffs[m - 2]));
        if (biggest == 0.0 || tail <= rel_tol * biggest || m >= max_m) break;
        m = 2 * (m - 1) + 1;
    }
    // trim negligible trailing coefficients
    double biggest = 0.0;
    for (auto& c : s.coeffs) biggest = std::max(biggest, std::abs(c));
    int keep = int(s.coeffs.size());
    while (keep > 2 && std::abs(s.coeffs[keep - 1]) < 1e-15 * biggest) --keep;
    s.coeffs.resize(keep);
    return s;
}

}  // namespace rhkit
