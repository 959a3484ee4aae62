#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

using rhkit::pi;

void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.resize(m);
    w.resize(m);
    for (int i = 0; i < m; ++i) {
        double t = std::cos(pi * (4.0 * i + 3.0) / (4.0 * m + 2.0));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = m * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= m; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = m * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

namespace {

cx gl_segment(const std::function<cx(cx)>& f, cx a, cx b, int m) {
    static std::vector<double> x20, w20, x40, w40;
    if (x20.empty()) {
        gauss_legendre(20, x20, w20);
        gauss_legendre(40, x40, w40);
    }
    const auto& x = (m == 20) ? x20 : x40;
    const auto& w = (m == 20) ? w20 : w40;
    cx mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cx acc{};
    for (size_t i = 0; i < x.size(); ++i) acc += w[i] * f(mid + half * x[i]);
    return acc * half;
}

}  // namespace

cx integrate_segment(const std::function<cx(cx)>& f, cx a, cx b, double tol, int depth) {
    cx coarse = gl_segment(f, a, b, 20);
    cx fine = gl_segment(f, a, b, 40);
    if (std::abs(fine - coarse) < tol * (1.0 + std::abs(fine)) || depth > 40) return fine;
    cx mid = 0.5 * (a + b);
    return integrate_segment(f, a, mid, tol, depth + 1) +
           integrate_segment(f, mid, b, tol, depth + 1);
}

cx cauchy_integral(const std::function<cx(cx)>& g, cx a, cx b, cx z, double tol) {
    auto f = [&](cx t) { return g(t) / (t - z); };
    cx val = integrate_segment(f, a, b, tol);
    return val / (2.0 * pi * rhkit::I_unit);
}

cx cauchy_pv_integral(const std::function<cx(cx)>& g, double x, double tol) {
    // split symmetrically around x: PV over (x-d, x+d) of the odd part + smooth rest
    double d = std::min(1.0 - x, 1.0 + x) * 0.5;
    auto smooth = [&](cx t) { return g(t) / (t - x); };
    cx outer = integrate_segment(smooth, cx{-1.0}, cx{x - d}, tol) +
               integrate_segment(smooth, cx{x + d}, cx{1.0}, tol);
    // \int_{x-d}^{x+d} g(t)/(t-x) dt = \int_0^d [g(x+s)-g(x-s)]/s ds
    auto folded = [&](cx s) {
        double sr = s.real();
        if (sr < 1e-300) return cx{};
        return (g(x + sr) - g(x - sr)) / sr;
    };
    cx inner = integrate_segment(folded, cx{0.0}, cx{d}, tol);
    return (outer + inner) / (2.0 * pi * rhkit::I_unit);
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      double tol, int depth) {
    auto fc = [&](cx t) { return cx{f(t.real()), 0.0}; };
    return integrate_segment(fc, cx{a}, cx{b}, tol, depth).real();
}

double chebT(int k, double x) {
    if (k == 0) return 1.0;
    double t0 = 1.0, t1 = x;
    for (int i = 2; i <= k; ++i) {
        double t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

cx chebT(int k, cx x) {
    if (k == 0) return cx{1.0};
    cx t0{1.0}, t1 = x;
    for (int i = 2; i <= k; ++i) {
        cx t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

double hermite_monic(int k, int n, double x) {
    if (k == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int j = 1; j < k; ++j) {
        double p2 = x * p1 - (double(j) / (2.0 * n)) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double hermite_monic_norm2(int k, int n) {
    double cut = std::sqrt(40.0 / n) + 4.0;
    auto f = [&](double x) {
        double p = hermite_monic(k, n, x);
        return p * p * std::exp(-double(n) * x * x);
    };
    return integrate_real(f, -cut, cut, 1e-13);
}

}  // namespace oracles
