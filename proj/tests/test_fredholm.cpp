#include "rhkit/fredholm.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace rhkit;

TEST_CASE("fredholm determinant oracles") {
    SUBCASE("zero kernel") {
        auto r = fredholm_det([](double, double) { return 0.0; }, 0.0, 1.0, 20);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("rank one constants") {
        // K = 1 on (0,1): det = 1 - tr = 0
        auto r = fredholm_det([](double, double) { return 1.0; }, 0.0, 1.0, 20);
        CHECK(std::abs(r.value) < 1e-12);
        // K(x,y) = x y on (0,1): det = 1 - 1/3
        auto r2 = fredholm_det([](double x, double y) { return x * y; }, 0.0, 1.0, 20);
        CHECK(r2.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }

    SUBCASE("self convergence") {
        auto r = fredholm_det([](double x, double y) { return std::exp(-(x - y) * (x - y)); },
                              -1.0, 1.5, 40);
        CHECK(r.err_est < 1e-12);
    }
}

TEST_CASE("sine kernel determinant") {
    CHECK(sine_det(0.0).value == 1.0);

    SUBCASE("monotone decreasing in s") {
        double d1 = sine_det(0.5).value;
        double d2 = sine_det(1.0).value;
        double d3 = sine_det(2.0).value;
        CHECK(d1 > d2);
        CHECK(d2 > d3);
        CHECK(d3 > 0.0);
        CHECK(d1 < 1.0);
    }

    SUBCASE("quadrature stability at s=1") {
        double a = sine_det(1.0, 40).value;
        double b = sine_det(1.0, 80).value;
        CHECK(std::abs(a - b) < 1e-10);
    }
}

TEST_CASE("airy kernel determinant") {
    SUBCASE("far right tail is 1") {
        CHECK(airy_det(8.0).value == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("probability range at s = -2") {
        double v = airy_det(-2.0).value;
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        double v2 = airy_det(-2.0, 60).value;
        CHECK(std::abs(v - v2) < 1e-8);
    }
    SUBCASE("distribution values stay in [0,1] and increase in s") {
        double prev = 0.0;
        for (double s : {-4.0, -2.0, 0.0, 2.0, 4.0}) {
            double v = airy_det(s).value;
            CHECK(v >= prev - 1e-10);
            CHECK(v >= 0.0 - 1e-8);
            CHECK(v <= 1.0 + 1e-8);
            prev = v;
        }
    }
}

TEST_CASE("gap statistics on the GUE kernel") {
    auto sys = solve_op(compute_equilibrium(Potential::gue()), 10);
    KernelHandle K{&sys};

    SUBCASE("empty window") {
        GapQuery q;
        q.s = 0.0;
        CHECK(gap_statistic(K, q).value == 1.0);
    }

    SUBCASE("plain windows decrease and nest") {
        GapQuery q;
        std::vector<double> vals;
        for (double s : {0.1, 0.25, 0.5}) {
            q.s = s;
            auto r = gap_statistic(K, q, 40);
            CHECK(r.value <= 1.0 + 1e-8);
            CHECK(r.value >= -1e-8);
            vals.push_back(r.value);
        }
        CHECK(vals[0] > vals[1]);
        CHECK(vals[1] > vals[2]);
    }

    SUBCASE("bulk scaling forms agree roughly") {
        GapQuery q;
        q.kind = GapQuery::Kind::bulk;
        q.x = 0.0;
        q.s = 0.7;
        auto byKernel = gap_statistic(K, q, 40);
        q.use_asymptotic_density = true;
        auto byDensity = gap_statistic(K, q, 40);
        CHECK(std::abs(byKernel.value - byDensity.value) < 0.05);
    }

    SUBCASE("level density mass and positivity") {
        std::vector<double> grid;
        for (int i = 0; i <= 60; ++i)
            grid.push_back(sys.eqm.a - 0.5 + (sys.eqm.b - sys.eqm.a + 1.0) * i / 60.0);
        auto d = level_density(K, grid);
        double mass = 0.0;
        for (size_t i = 0; i + 1 < d.size(); ++i) {
            CHECK(d[i].second > -1e-9);
            mass += 0.5 * (d[i].second + d[i + 1].second) * (d[i + 1].first - d[i].first);
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("bulk cauchy convergence of scaled gaps") {
    // |gap(n) - gap(2n)| decreasing at s = 1 for n = 10, 20, 40
    auto eqm = compute_equilibrium(Potential::gue());
    GapQuery q;
    q.kind = GapQuery::Kind::bulk;
    q.x = 0.0;
    q.s = 1.0;
    std::vector<double> gaps;
    for (int n : {10, 20, 40, 80}) {
        auto sys = solve_op(eqm, n);
        KernelHandle K{&sys};
        gaps.push_back(gap_statistic(K, q, 40).value);
    }
    double d1 = std::abs(gaps[0] - gaps[1]);
    double d2 = std::abs(gaps[1] - gaps[2]);
    double d3 = std::abs(gaps[2] - gaps[3]);
    CHECK(d2 < d1);
    CHECK(d3 < d2);
}

TEST_CASE("gue sampler") {
    SUBCASE("deterministic and mean-centred") {
        auto ev = gue_sample(10, 200, 42);
        auto ev2 = gue_sample(10, 200, 42);
        CHECK(ev == ev2);
        double mean = 0.0;
        int count = 0;
        for (auto& t : ev)
            for (double v : t) {
                mean += v;
                ++count;
            }
        mean /= count;
        CHECK(std::abs(mean) < 3.0 / std::sqrt(double(count)));
    }

    SUBCASE("support near the semicircle edge") {
        auto ev = gue_sample(100, 200, 7);
        double lo = 1e300, hi = -1e300;
        for (auto& t : ev)
            for (double v : t) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        double edge = std::sqrt(2.0);
        CHECK(lo > -edge - 0.3);
        CHECK(hi < edge + 0.3);
    }

    SUBCASE("histogram against the level density") {
        int n = 10, trials = 5000;
        auto ev = gue_sample(n, trials, 1234);
        auto sys = solve_op(compute_equilibrium(Potential::gue()), n);
        KernelHandle K{&sys};
        int bins = 20;
        double lo = -2.0, hi = 2.0, width = (hi - lo) / bins;
        std::vector<int> counts(bins, 0);
        int total = 0;
        for (auto& t : ev)
            for (double v : t)
                if (v >= lo && v < hi) {
                    ++counts[int((v - lo) / width)];
                    ++total;
                }
        for (int bin = 0; bin < bins; ++bin) {
            double x = lo + (bin + 0.5) * width;
            double p = K.kernel_diag(x) / n * width;  // per-eigenvalue bin probability
            double expct = p * trials * n;
            double sigma = std::sqrt(std::max(1.0, expct * (1.0 - p)));
            CHECK(std::abs(counts[bin] - expct) < 4.0 * sigma);
        }
    }
}
