#include "rhkit/painleve2.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace rhkit;

namespace {

const StokesTriple hm{I_unit, 0.0, -I_unit};

// 4th-order Runge-Kutta on u'' = x u + 2 u^3
std::pair<double, double> rk4_pii(double x0, double u0, double du0, double x1, int steps) {
    double h = (x1 - x0) / steps;
    double u = u0, v = du0, x = x0;
    auto f = [](double xx, double uu) { return xx * uu + 2.0 * uu * uu * uu; };
    for (int i = 0; i < steps; ++i) {
        double k1u = v, k1v = f(x, u);
        double k2u = v + 0.5 * h * k1v, k2v = f(x + 0.5 * h, u + 0.5 * h * k1u);
        double k3u = v + 0.5 * h * k2v, k3v = f(x + 0.5 * h, u + 0.5 * h * k2u);
        double k4u = v + h * k3v, k4v = f(x + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        x += h;
    }
    return {u, v};
}

}  // namespace

TEST_CASE("stokes constraints") {
    CHECK(hm.valid());
    CHECK(StokesTriple{0.0, 0.0, 0.0}.valid());
    // s1 = s3 = 1 forces the constraint 2 != 0: invalid for every s2
    StokesTriple bad{1.0, 0.37, 1.0};
    CHECK(!bad.valid());
    CHECK_THROWS_AS(stokes_extend(bad, 0.0), std::invalid_argument);
    CHECK(std::abs(StokesTriple{1.0, 3.0, 0.5}.constraint()) < 1e-12);

    // jump exponents decay along their rays
    auto jumps = stokes_extend(hm, 1.0);
    for (int k : {0, 2, 3, 5}) {
        cx dir = std::exp(cx{0.0, pi * ((k + 1) / 3.0 - 1.0 / 6.0)});
        double g1 = (jumps[k](1.0 * dir) - Mat2::identity()).norm();
        double g2 = (jumps[k](2.0 * dir) - Mat2::identity()).norm();
        CHECK(g2 < g1 + 1e-12);
    }
}

TEST_CASE("undeformed six-ray solve") {
    SUBCASE("zero data gives the zero solution") {
        CHECK(std::abs(pii_undeformed({0.0, 0.0, 0.0}, 1.3)) == 0.0);
    }

    SUBCASE("hastings-mcleod values are real") {
        for (double x : {-1.0, 0.0, 1.5}) {
            cx u = pii_undeformed(hm, x, 40);
            CHECK(std::abs(u.imag()) < 1e-9);
        }
    }

    SUBCASE("self convergence in m") {
        cx u1 = pii_undeformed(hm, 0.5, 30);
        cx u2 = pii_undeformed(hm, 0.5, 60);
        CHECK(std::abs(u1 - u2) < 1e-9);
    }

    SUBCASE("ODE residual via five-point stencil") {
        double h = 1e-3;
        double x0 = 0.3;
        double um2 = pii_undeformed(hm, x0 - 2 * h, 40).real();
        double um1 = pii_undeformed(hm, x0 - h, 40).real();
        double u0 = pii_undeformed(hm, x0, 40).real();
        double up1 = pii_undeformed(hm, x0 + h, 40).real();
        double up2 = pii_undeformed(hm, x0 + 2 * h, 40).real();
        double upp = (-um2 + 16 * um1 - 30 * u0 + 16 * up1 - up2) / (12 * h * h);
        double rhs = x0 * u0 + 2.0 * u0 * u0 * u0;
        CHECK(std::abs(upp - rhs) < 1e-4 * (1.0 + std::abs(upp)));
    }
}

TEST_CASE("positive-x deformation") {
    SUBCASE("theta data") {
        CHECK(std::abs(pii_theta(cx{0.0, 0.5}, 0.0) - cx{0.0, 1.0 / 3.0}) < 1e-15);
        // stationary points of the phase sit at +-i/2
        auto dtheta = [](cx z) { return 4.0 * z * z + 1.0; };
        CHECK(std::abs(dtheta(cx{0.0, 0.5})) < 1e-15);
        CHECK(std::abs(dtheta(cx{0.0, -0.5})) < 1e-15);
    }

    SUBCASE("matches the undeformed solve at the regime boundary") {
        cx a = pii_undeformed(hm, 2.5, 50);
        cx b = pii_positive(hm, 2.5, 50);
        CHECK(std::abs(a - b) < 1e-7);
    }

    SUBCASE("agrees with ODE propagation out to x = 6") {
        double h = 1e-3;
        double u0 = pii_undeformed(hm, 2.5, 40).real();
        double du0 = (pii_undeformed(hm, 2.5 + h, 40).real() -
                      pii_undeformed(hm, 2.5 - h, 40).real()) /
                     (2.0 * h);
        auto [u6, du6] = rk4_pii(2.5, u0, du0, 6.0, 4000);
        double rh = pii_positive(hm, 6.0, 40).real();
        CHECK(std::abs(rh - u6) < 1e-5 * std::max(1.0, std::abs(u6)));
    }

    SUBCASE("unsupported stokes data is refused") {
        StokesTriple s{1.0, 3.0, 0.5};
        CHECK_THROWS_AS(pii_positive(s, 4.0, 20), std::invalid_argument);
    }
}

TEST_CASE("hastings-mcleod negative deformation") {
    SUBCASE("branch structure of the phase") {
        // g+ + g- = 0 on the cut; g - theta decays
        double t = 0.3;
        cx gp = hm_g(cx{t}, Side::plus), gm = hm_g(cx{t}, Side::minus);
        CHECK(std::abs(gp + gm) < 1e-13);
        CHECK((hm_g(cx{0.2}, Side::minus) - hm_g(cx{0.2}, Side::plus)).imag() > 0.0);
        for (double zp : {10.0, 100.0}) {
            cx diff = hm_g(cx{zp}) - 2.0 * pii_theta(cx{zp}, pi);
            CHECK(std::abs(diff) < 3.0 / zp);
        }
        // beta solves its own scalar jump and normalization
        cx bp = hm_beta(cx{t}, Side::plus), bm = hm_beta(cx{t}, Side::minus);
        CHECK(std::abs(bp - I_unit * bm) < 1e-13);
        CHECK(std::abs(hm_beta(cx{1e8}) - 1.0) < 1e-7);
    }

    SUBCASE("asymptotics -sqrt(-x/2)") {
        double u10 = pii_negative_hm(hm, -10.0, 30).real();
        CHECK(std::abs(u10 + std::sqrt(5.0)) < 0.02);
        // scaled correction bounded and comparable between x = -20 and -30
        double u20 = pii_negative_hm(hm, -20.0, 30).real();
        double u30 = pii_negative_hm(hm, -30.0, 30).real();
        double c20 = std::abs(u20 + std::sqrt(10.0)) * std::pow(20.0, 2.5);
        double c30 = std::abs(u30 + std::sqrt(15.0)) * std::pow(30.0, 2.5);
        CHECK(c20 / c30 < 3.0);
        CHECK(c30 / c20 < 3.0);
    }

    SUBCASE("relative error plateau") {
        std::vector<double> rel;
        for (double x : {-15.0, -20.0, -25.0, -30.0}) {
            double u = pii_negative_hm(hm, x, 30).real();
            rel.push_back(std::abs((u + std::sqrt(-x / 2.0)) / std::pow(x, -2.5)));
        }
        double lo = *std::min_element(rel.begin(), rel.end());
        double hi = *std::max_element(rel.begin(), rel.end());
        CHECK((hi - lo) / hi < 0.2);
    }

    SUBCASE("matches the undeformed solve at the regime boundary") {
        cx a = pii_undeformed(hm, -2.0, 50);
        // the deformed route is valid for any negative x
        cx b = pii_negative_hm(hm, -2.0, 50);
        CHECK(std::abs(a - b) < 1e-8);
    }

    SUBCASE("the other sign branch") {
        StokesTriple hm2{-I_unit, 0.0, I_unit};
        double u = pii_negative_hm(hm2, -10.0, 30).real();
        CHECK(std::abs(u - std::sqrt(5.0)) < 0.02);
    }

    SUBCASE("wrong stokes data is refused") {
        CHECK_THROWS_AS(pii_negative_hm({1.0, 3.0, 0.5}, -5.0, 20), std::invalid_argument);
    }
}

TEST_CASE("dispatcher") {
    SUBCASE("continuity across the regime boundaries") {
        cx left_in = pii(hm, -2.5, 50);
        cx left_out = pii_negative_hm(hm, -2.5001, 50);
        CHECK(std::abs(left_in - left_out) < 1e-6);
        cx right_in = pii(hm, 2.5, 50);
        cx right_out = pii(hm, 2.5001, 50);
        CHECK(std::abs(right_in - right_out) < 1e-7);
    }

    SUBCASE("zero data everywhere") {
        for (double x : {-8.0, 0.3, 5.0}) {
            StokesTriple z0{0.0, 0.0, 0.0};
            if (std::abs(x) <= 2.5) CHECK(std::abs(pii(z0, x)) == 0.0);
        }
    }

    SUBCASE("pole-free on the real line") {
        for (double x = -12.0; x <= 8.0; x += 0.5) {
            double u = pii(hm, x, 24).real();
            CHECK(std::abs(u) < 10.0);
        }
    }

    SUBCASE("ODE residual across all regimes") {
        for (double x0 : {-5.0, -1.0, 1.3, 3.0}) {
            double h = 1e-3;
            double um2 = pii(hm, x0 - 2 * h, 40).real();
            double um1 = pii(hm, x0 - h, 40).real();
            double u0 = pii(hm, x0, 40).real();
            double up1 = pii(hm, x0 + h, 40).real();
            double up2 = pii(hm, x0 + 2 * h, 40).real();
            double upp = (-um2 + 16 * um1 - 30 * u0 + 16 * up1 - up2) / (12 * h * h);
            double rhs = x0 * u0 + 2.0 * u0 * u0 * u0;
            CHECK(std::abs(upp - rhs) < 1e-4 * (1.0 + std::abs(upp)));
        }
    }
}
