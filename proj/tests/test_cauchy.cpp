#include "rhkit/cauchy.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace rhkit;

TEST_CASE("inverse Joukowski branch") {
    CHECK(std::abs(inv_joukowski_exterior(cx{1.25}) - 0.5) < 1e-14);
    CHECK(std::abs(inv_joukowski_exterior(cx{1.0}) - 1.0) < 1e-14);

    // large-z asymptotic 1/(2z)
    for (cx z : {cx{1e6, 0.0}, cx{0.0, 1e7}, cx{-3e6, 2e6}}) {
        cx w = inv_joukowski_exterior(z);
        CHECK(std::abs(w - 1.0 / (2.0 * z)) < 1e-9 * std::abs(w));
    }

    // J(w) = z round trip, |w| <= 1
    for (cx z : {cx{2.0, 1.0}, cx{-0.3, 0.02}, cx{0.1, -3.0}, cx{-5.0, 0.0}}) {
        cx w = inv_joukowski_exterior(z);
        CHECK(std::abs(w) <= 1.0 + 1e-14);
        CHECK(std::abs(0.5 * (w + 1.0 / w) - z) < 1e-12 * (1.0 + std::abs(z)));
    }

    // downward boundary branch is the limit from above
    for (double x : {-0.7, 0.0, 0.4}) {
        cx wlim = inv_joukowski_exterior(cx{x, 1e-9});
        cx wb = inv_joukowski_boundary(x, Side::plus);
        CHECK(std::abs(wlim - wb) < 1e-7);
    }
}

TEST_CASE("psi_k values") {
    CHECK(std::abs(psi_k(0, cx{0.0})) < 1e-15);
    cx expect = 2.0 / (I_unit * pi) * std::atanh(cx{0.5});
    CHECK(std::abs(psi_k(0, cx{0.5}) - expect) < 1e-14);
    CHECK(std::abs(std::atanh(cx{0.5}).real() - 0.5493061443340549) < 1e-14);

    CHECK_THROWS_AS(psi_k(2, cx{1.0}), std::domain_error);

    // pair identity against the quadrature oracle (k = 1, w = 0.3 and friends)
    for (cx w : {cx{0.3, 0.0}, cx{0.2, 0.35}, cx{-0.45, -0.2}, cx{0.62, 0.1}}) {
        cx z = 0.5 * (w + 1.0 / w);
        for (int k : {1, 2, 5}) {
            cx viaPsi = -0.5 * (psi_k(k, w) + psi_k(-k, w));
            cx oracle = oracles::cauchy_integral(
                [&](cx t) { return oracles::chebT(k, t); }, cx{-1.0}, cx{1.0}, z);
            CHECK(std::abs(viaPsi - oracle) < 1e-11);
        }
    }
}

TEST_CASE("cauchy_basis against adaptive quadrature") {
    SUBCASE("k=0 on (-1,1) at 2i") {
        cx val = cauchy_basis(0, IntervalMap{-1.0, 1.0}, cx{0.0, 2.0});
        cx oracle = oracles::cauchy_integral([](cx) { return cx{1.0}; }, cx{-1.0}, cx{1.0},
                                             cx{0.0, 2.0});
        CHECK(std::abs(val - oracle) < 1e-12);
    }

    SUBCASE("k=3 on (0,2) at 1+i") {
        IntervalMap map{0.0, 2.0};
        cx z{1.0, 1.0};
        cx val = cauchy_basis(3, map, z);
        cx oracle = oracles::cauchy_integral([&](cx t) { return oracles::chebT(3, map.forward(t)); },
                                             cx{0.0}, cx{2.0}, z);
        CHECK(std::abs(val - oracle) < 1e-12);
    }

    SUBCASE("k <= 10 at generic complex points") {
        IntervalMap map{cx{-0.5, 0.3}, cx{1.2, -0.4}};
        std::vector<cx> pts = {cx{0.8, 1.1},  cx{-1.3, 0.4}, cx{2.2, 0.1},  cx{0.3, -1.5},
                               cx{-0.2, 2.4}, cx{1.4, 1.4},  cx{-2.0, -1.0}, cx{0.9, 0.35},
                               cx{3.5, -2.0}, cx{0.05, 0.9}};
        for (cx z : pts) {
            auto all = cauchy_basis_all(11, map, BasisPointQuery{z});
            for (int k = 0; k <= 10; ++k) {
                cx oracle = oracles::cauchy_integral(
                    [&](cx t) { return oracles::chebT(k, map.forward(t)); }, map.a, map.b, z,
                    1e-14);
                CHECK(std::abs(all[k] - oracle) < 1e-10);
            }
        }
    }

    SUBCASE("decay at infinity") {
        IntervalMap map{-1.0, 1.0};
        for (int k : {0, 1, 4, 9}) {
            double prev = 1e300;
            for (double R : {10.0, 100.0, 1000.0}) {
                cx z{R, 0.7 * R};
                double v = std::abs(cauchy_basis(k, map, z)) * std::abs(z);
                CHECK(v < 2.0);  // O(1/z): |z * C T_k| stays bounded
                prev = v;
            }
        }
    }

    SUBCASE("high k and near-circle points stay accurate") {
        IntervalMap map{-1.0, 1.0};
        // point close to the contour (|w| near 1) exercises the subtraction path
        cx z{0.37, 1e-4};
        auto all = cauchy_basis_all(40, map, BasisPointQuery{z});
        for (int k : {0, 7, 23, 39}) {
            cx oracle = oracles::cauchy_integral(
                [&](cx t) { return oracles::chebT(k, map.forward(t)); }, map.a, map.b, z, 1e-14);
            CHECK(std::abs(all[k] - oracle) < 1e-9);
        }
    }
}

TEST_CASE("boundary values and the Plemelj jump") {
    IntervalMap map{-1.0, 1.0};

    SUBCASE("k=0: difference is 1, sum vanishes at the origin") {
        cx plus = cauchy_basis_boundary(0, map, cx{0.0}, Side::plus);
        cx minus = cauchy_basis_boundary(0, map, cx{0.0}, Side::minus);
        CHECK(std::abs(plus - minus - 1.0) < 1e-13);
        CHECK(std::abs(plus + minus) < 1e-13);  // PV integral = 0 by symmetry
        cx pv = oracles::cauchy_pv_integral([](cx) { return cx{1.0}; }, 0.0);
        CHECK(std::abs(plus + minus - 2.0 * pv) < 1e-11);
    }

    SUBCASE("k=2 at 0.3") {
        cx plus = cauchy_basis_boundary(2, map, cx{0.3}, Side::plus);
        cx minus = cauchy_basis_boundary(2, map, cx{0.3}, Side::minus);
        CHECK(std::abs(plus - minus - (-0.82)) < 1e-13);
    }

    SUBCASE("jump identity for k <= 20 at 10 interior points") {
        IntervalMap leg{cx{-0.4, 0.2}, cx{1.0, 0.9}};
        for (int i = 1; i <= 10; ++i) {
            double t = -1.0 + 2.0 * i / 11.0;
            cx x = leg.inverse(t);
            BasisPointQuery qp{x, true, Side::plus};
            BasisPointQuery qm{x, true, Side::minus};
            auto vp = cauchy_basis_all(21, leg, qp);
            auto vm = cauchy_basis_all(21, leg, qm);
            for (int k = 0; k <= 20; ++k) {
                cx expect = oracles::chebT(k, cx{t});
                CHECK(std::abs(vp[k] - vm[k] - expect) < 1e-11);
            }
        }
    }

    SUBCASE("boundary values agree with near-contour limits") {
        for (int k : {0, 3, 8}) {
            cx plus = cauchy_basis_boundary(k, map, cx{0.25}, Side::plus);
            cx near_val = cauchy_basis(k, map, cx{0.25, 1e-8});
            CHECK(std::abs(plus - near_val) < 1e-6);
        }
    }
}

TEST_CASE("junction finite parts") {
    IntervalMap map{-1.0, 1.0};

    SUBCASE("slope constants are exact") {
        // r_0^R = 1/(2 pi i): finite part changes linearly in theta with slope i r
        cx v1 = cauchy_basis_junction(0, map, Endpoint::right, 0.5);
        cx v2 = cauchy_basis_junction(0, map, Endpoint::right, 1.1);
        cx slope = (v2 - v1) / 0.6;
        CHECK(std::abs(slope - I_unit / (2.0 * pi * I_unit)) < 1e-13);
        // left endpoint, k = 1: r_1^L = +1/(2 pi i)
        cx u1 = cauchy_basis_junction(1, map, Endpoint::left, 0.4 + pi);
        cx u2 = cauchy_basis_junction(1, map, Endpoint::left, 1.0 + pi);
        cx slopeL = (u2 - u1) / 0.6;
        CHECK(std::abs(slopeL - I_unit * (1.0 / (2.0 * pi * I_unit))) < 1e-13);
    }

    SUBCASE("mu polynomial term counts") {
        CHECK(std::abs(mu_poly(0, cx{0.7})) == 0.0);
        CHECK(std::abs(mu_poly(1, cx{0.7}) - 0.7) < 1e-15);
        cx z{0.4, 0.1};
        CHECK(std::abs(mu_poly(3, z) - (z + z * z * z / 3.0)) < 1e-15);
    }

    SUBCASE("finite part matches extrapolated ray limits") {
        // remove the log singularity along a ray and extrapolate radii to zero,
        // in the variable sqrt(eps) (the expansion has half-power corrections)
        IntervalMap leg{cx{0.0, 0.0}, cx{2.0, 1.0}};
        for (auto epk : {Endpoint::left, Endpoint::right}) {
            cx zend = (epk == Endpoint::left) ? leg.a : leg.b;
            double thetaLeg = leg.angle();
            for (double dth : {0.5 * pi, -0.4 * pi, 0.8 * pi}) {
                double theta = (epk == Endpoint::left ? thetaLeg : thetaLeg + pi) + dth;
                for (int k : {0, 1, 4}) {
                    cx r = (epk == Endpoint::right)
                               ? cx{1.0} / (2.0 * pi * I_unit)
                               : -((k % 2 == 0) ? 1.0 : -1.0) / (2.0 * pi * I_unit);
                    std::vector<double> eps = {1e-5, 3e-6, 1e-6, 3e-7, 1e-7, 3e-8, 1e-8, 1e-9};
                    std::vector<double> h;
                    std::vector<cx> u;
                    for (double e : eps) {
                        cx z = zend + e * std::exp(I_unit * theta);
                        u.push_back(cauchy_basis(k, leg, z) - r * std::log(e));
                        h.push_back(std::sqrt(e));
                    }
                    // Neville extrapolation h -> 0
                    auto tab = u;
                    int n = int(tab.size());
                    for (int lev = 1; lev < n; ++lev)
                        for (int i = 0; i < n - lev; ++i)
                            tab[i] = tab[i + 1] + (tab[i + 1] - tab[i]) * h[i + lev] /
                                                       (h[i] - h[i + lev]);
                    cx limit = tab[0];
                    cx fp = cauchy_basis_junction(k, leg, epk, theta);
                    CHECK(std::abs(limit - fp) < 1e-7);
                }
            }
        }
    }

    SUBCASE("plus-minus junction limits recover the endpoint jump") {
        for (int k : {0, 1, 5}) {
            cx p = cauchy_basis_junction(k, map, Endpoint::right, pi, Side::plus);
            cx m = cauchy_basis_junction(k, map, Endpoint::right, pi, Side::minus);
            CHECK(std::abs(p - m - 1.0) < 1e-13);  // T_k(1) = 1
            cx pl = cauchy_basis_junction(k, map, Endpoint::left, 0.0, Side::plus);
            cx ml = cauchy_basis_junction(k, map, Endpoint::left, 0.0, Side::minus);
            double tk = (k % 2 == 0) ? 1.0 : -1.0;
            CHECK(std::abs(pl - ml - tk) < 1e-13);
        }
    }
}
