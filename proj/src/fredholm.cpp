#include "rhkit/fredholm.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rhkit/airy.hpp"

namespace rhkit {

void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.resize(m);
    w.resize(m);
    for (int i = 0; i < m; ++i) {
        double t = std::cos(pi * (4.0 * i + 3.0) / (4.0 * m + 2.0));
        double p1 = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        {
            double p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (t * p1 - p0) / (t * t - 1.0);
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

namespace {

double nystrom_det(const KernelFn& K, double lo, double hi, int m) {
    if (hi <= lo) return 1.0;
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    std::vector<double> nodes(m), sw(m);
    for (int i = 0; i < m; ++i) {
        nodes[i] = mid + half * x[i];
        sw[i] = std::sqrt(w[i] * half);
    }
    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double k = K(nodes[i], nodes[j]);
            if (!std::isfinite(k)) throw std::runtime_error("fredholm_det: kernel not finite");
            A(i, j) = (i == j ? 1.0 : 0.0) - sw[i] * k * sw[j];
        }
    return A.partialPivLu().determinant();
}

}  // namespace

DeterminantResult fredholm_det(const KernelFn& K, double lo, double hi, int m) {
    DeterminantResult r;
    double coarse = nystrom_det(K, lo, hi, m);
    double fine = nystrom_det(K, lo, hi, 2 * m);
    r.value = fine;
    r.m = 2 * m;
    r.err_est = std::abs(fine - coarse);
    return r;
}

DeterminantResult sine_det(double s, int m) {
    if (s < 0.0) throw std::invalid_argument("sine_det: s >= 0");
    if (s == 0.0) return {1.0, 0, 0.0};
    auto K = [](double x, double y) {
        double d = x - y;
        if (std::abs(d) < 1e-9) return 1.0 - d * d / 6.0;
        return std::sin(d) / d;
    };
    return fredholm_det(K, -s, s, m);
}

DeterminantResult airy_det(double s, int m) {
    double xmax = std::max(s + 1.0, 14.0);
    auto K = [](double x, double y) {
        double d = x - y;
        if (std::abs(d) < 1e-7) {
            double mid = 0.5 * (x + y);
            AiryPair pm = airy(cx{mid});
            return pm.dAi.real() * pm.dAi.real() - mid * pm.Ai.real() * pm.Ai.real();
        }
        AiryPair px = airy(cx{x}), py = airy(cx{y});
        return (px.Ai.real() * py.dAi.real() - px.dAi.real() * py.Ai.real()) / d;
    };
    return fredholm_det(K, s, xmax, m);
}

DeterminantResult gap_statistic(const KernelHandle& K, const GapQuery& q, int m) {
    if (q.s == 0.0) return {1.0, 0, 0.0};
    const OPSystem& sys = *K.sys;
    double lo, hi;
    switch (q.kind) {
        case GapQuery::Kind::plain:
            lo = -q.s;
            hi = q.s;
            break;
        case GapQuery::Kind::bulk: {
            double scale = q.use_asymptotic_density ? double(sys.n) * sys.eqm.density(q.x)
                                                    : K.kernel_diag(q.x);
            if (!(scale > 0.0))
                throw std::runtime_error("gap_statistic: bulk window needs positive density");
            lo = q.x - q.s / scale;
            hi = q.x + q.s / scale;
            break;
        }
        case GapQuery::Kind::edge: {
            double c = edge_constant(sys.eqm);  // throws for a degenerate edge
            lo = sys.eqm.b + q.s / (c * std::pow(double(sys.n), 2.0 / 3.0));
            double x = std::max(lo, sys.eqm.b);
            double step = 0.02 * (sys.eqm.b - sys.eqm.a);
            while (K.kernel_diag(x) > 1e-16 && x < sys.eqm.b + 60.0 * step) x += step;
            hi = x + step;
            if (hi <= lo) return {1.0, 0, 0.0};
            break;
        }
        default: throw std::invalid_argument("gap_statistic: bad kind");
    }
    auto KF = [&](double x, double y) { return K.kernel(x, y); };
    return fredholm_det(KF, lo, hi, m);
}

std::vector<std::pair<double, double>> level_density(const KernelHandle& K,
                                                     const std::vector<double>& grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double x : grid) out.emplace_back(x, K.kernel_diag(x) / double(K.sys->n));
    return out;
}

namespace {

// splitmix64 counter generator; one independent stream per (seed, trial)
struct CounterRng {
    std::uint64_t state;
    explicit CounterRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }
    double normal() {
        double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }
};

}  // namespace

std::vector<std::vector<double>> gue_sample(int n, int trials, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gue_sample: n >= 1");
    std::vector<std::vector<double>> out;
    out.reserve(trials);
    double sd_diag = std::sqrt(1.0 / (2.0 * n));
    double sd_off = std::sqrt(1.0 / (4.0 * n));
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed * 0x2545f4914f6cdd1dull + std::uint64_t(t) * 0x9e3779b97f4a7c15ull);
        Eigen::MatrixXcd M(n, n);
        for (int i = 0; i < n; ++i) {
            M(i, i) = sd_diag * rng.normal();
            for (int j = i + 1; j < n; ++j) {
                double re = sd_off * rng.normal(), im = sd_off * rng.normal();
                M(i, j) = std::complex<double>(re, im);
                M(j, i) = std::complex<double>(re, -im);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
        std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
        out.push_back(std::move(ev));
    }
    return out;
}

}  // namespace rhkit
