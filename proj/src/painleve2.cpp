#include "rhkit/painleve2.hpp"

#include <array>

namespace rhkit {

namespace {

const double hm_alpha = std::sqrt(0.5);

void require_valid(const StokesTriple& s) {
    if (!s.valid())
        throw std::invalid_argument("Stokes constraint s1 - s2 + s3 + s1 s2 s3 = 0 violated");
}

cx ray_direction(int k) { return std::exp(cx{0.0, pi * (k / 3.0 - 1.0 / 6.0)}); }

// truncation radius where the ray jump is identity to 1e-16; evaluated at the
// regime ceiling |x| = 2.5 so the contour does not wobble with x
double ray_radius(cx sk, double) {
    if (std::abs(sk) == 0.0) return 0.0;
    double target = std::log(1e-16 / std::abs(sk));
    const double xcap = 2.5;
    double lo = 0.5, hi = 0.5;
    auto expo = [&](double r) { return -(8.0 / 3.0) * r * r * r + 2.0 * xcap * r; };
    while (expo(hi) > target && hi < 50.0) hi += 0.5;
    lo = std::max(0.5, hi - 0.5);
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (expo(mid) > target ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

std::array<std::function<Mat2(cx)>, 6> stokes_extend(const StokesTriple& s, double x) {
    require_valid(s);
    std::array<cx, 6> sk = {s.s1, s.s2, s.s3, s.s1, s.s2, s.s3};
    std::array<std::function<Mat2(cx)>, 6> out;
    for (int k = 1; k <= 6; ++k) {
        cx c = sk[k - 1];
        bool even = (k % 2 == 0);
        out[k - 1] = [c, even, x](cx lam) -> Mat2 {
            cx ph = I_unit * (8.0 / 3.0) * lam * lam * lam + 2.0 * I_unit * x * lam;
            if (even) return Mat2{1.0, c * std::exp(-ph), 0.0, 1.0};
            return Mat2{1.0, 0.0, c * std::exp(ph), 1.0};
        };
    }
    return out;
}

cx pii_theta(cx z, double argx) {
    return (4.0 / 3.0) * z * z * z + std::exp(cx{0.0, argx}) * z;
}

cx pii_undeformed(const StokesTriple& s, double x, int m) {
    require_valid(s);
    if (std::abs(x) > 2.5 + 1e-12)
        throw std::invalid_argument("pii_undeformed: |x| <= 2.5 (oscillation budget)");
    auto jumps = stokes_extend(s, x);
    std::array<cx, 6> sk = {s.s1, s.s2, s.s3, s.s1, s.s2, s.s3};

    RHProblem p;
    std::vector<int> which;
    for (int k = 1; k <= 6; ++k) {
        if (std::abs(sk[k - 1]) == 0.0) continue;  // identity jump, leg dropped
        double R = ray_radius(sk[k - 1], x);
        p.legs.push_back({IntervalMap{cx{0.0}, R * ray_direction(k)}});
        which.push_back(k - 1);
    }
    if (p.legs.empty()) return cx{0.0};
    p.jump = [jumps, which](int leg, cx z) { return jumps[which[leg]](z); };
    auto sol = solve(p, m);
    return 2.0 * sol.first_moment().a12;
}

cx pii_positive(const StokesTriple& s, double x, int m) {
    require_valid(s);
    if (std::abs(s.s2) != 0.0)
        throw std::invalid_argument("pii_positive: deformation requires s2 = 0");
    if (!(x > 0.0)) throw std::invalid_argument("pii_positive: x > 0");
    double E = std::pow(x, 1.5);
    double L = 4.0 * std::pow(x, -0.75);
    cx s1 = s.s1;

    // horizontal crosses through the stationary points +-i/2
    RHProblem p;
    p.legs.push_back({IntervalMap{cx{-L, 0.5}, cx{L, 0.5}}});
    p.legs.push_back({IntervalMap{cx{-L, -0.5}, cx{L, -0.5}}});
    // with both lines oriented left to right (plus side above), the upper
    // carries the lower-triangular s1 factor and the lower carries -s1
    p.jump = [E, s1](int leg, cx z) -> Mat2 {
        cx ph = 2.0 * I_unit * E * pii_theta(z, 0.0);
        if (leg == 0) return Mat2{1.0, 0.0, s1 * std::exp(ph), 1.0};
        return Mat2{1.0, -s1 * std::exp(-ph), 0.0, 1.0};
    };
    auto pieces = split_into_pieces(p);
    auto comp = scaled_solve(pieces, m);
    return 2.0 * std::sqrt(x) * comp.first_moment().a12;
}

cx hm_g(cx z, Side side) {
    if (std::abs(z.imag()) < 1e-13 * (1.0 + std::abs(z.real()))) z = cx{z.real(), 0.0};
    cx f1, f2;
    if (z.imag() == 0.0 && std::abs(z.real()) < hm_alpha) {
        double r = hm_alpha - z.real();
        f1 = std::pow(r, 1.5) * std::exp(cx{0.0, side == Side::plus ? 1.5 * pi : -1.5 * pi});
        f2 = std::pow(cx{z.real() + hm_alpha}, 1.5);
    } else {
        f1 = std::pow(z - hm_alpha, 1.5);
        f2 = std::pow(z + hm_alpha, 1.5);
    }
    return (8.0 / 3.0) * f1 * f2;
}

cx hm_beta(cx z, Side side) {
    if (std::abs(z.imag()) < 1e-13 * (1.0 + std::abs(z.real()))) z = cx{z.real(), 0.0};
    if (z.imag() == 0.0 && std::abs(z.real()) < hm_alpha) {
        double r = std::pow((hm_alpha - z.real()) / (z.real() + hm_alpha), 0.25);
        return r * std::exp(cx{0.0, side == Side::plus ? pi / 4.0 : -pi / 4.0});
    }
    return std::pow((z - hm_alpha) / (z + hm_alpha), 0.25);
}

namespace {

Mat2 hm_psi_out(cx z, Side side, cx s1) {
    cx b = hm_beta(z, side);
    cx u = b + 1.0 / b, v = b - 1.0 / b;
    return 0.5 * Mat2{u, -I_unit * s1 * v, -I_unit * s1 * v, u};
}

}  // namespace

RHProblem hm_delta_problem(const StokesTriple& s, double x) {
    require_valid(s);
    if (!(x < 0.0)) throw std::invalid_argument("pii_negative_hm: x < 0");
    bool plus_branch = std::abs(s.s1 - I_unit) < 1e-12 && std::abs(s.s3 + I_unit) < 1e-12;
    bool minus_branch = std::abs(s.s1 + I_unit) < 1e-12 && std::abs(s.s3 - I_unit) < 1e-12;
    if (std::abs(s.s2) != 0.0 || (!plus_branch && !minus_branch))
        throw std::invalid_argument("pii_negative_hm: requires s1 = -s3 = +-i, s2 = 0");
    cx s1 = s.s1;
    double E = std::pow(-x, 1.5);
    double a = hm_alpha;
    double r = std::min(1.0 / (-x), 0.45 * a);

    // branch check: g - theta must decay at infinity
    for (double zp : {10.0, 100.0}) {
        cx diff = hm_g(cx{zp}) - 2.0 * pii_theta(cx{zp}, pi);
        if (std::abs(diff) > 10.0 / zp)
            throw std::runtime_error("pii_negative_hm: branch of g fails g - theta -> 0");
    }

    auto vtx = [&](double c, double t) {
        cx d = std::exp(cx{0.0, t});
        if (std::abs(d.imag()) < 1e-15) d = cx{d.real() > 0 ? 1.0 : -1.0, 0.0};
        return cx{c} + r * d;
    };

    struct Kind {
        int kind;    // 0 kite-right, 1 kite-left, 2 ray, 3 segment
        int sector;  // kite sectors 1..4 counterclockwise from the east; rays 1,6,3,4
        Side hint;   // boundary side for the cut functions
    };
    RHProblem p;
    std::vector<Kind> kk;
    auto add = [&](cx z1, cx z2, int kind, int sector) {
        p.legs.push_back({IntervalMap{z1, z2}});
        Side hint = (0.5 * (z1 + z2)).imag() >= 0.0 ? Side::plus : Side::minus;
        kk.push_back({kind, sector, hint});
    };

    auto ray_len = [&](cx from, cx dir) {
        auto expo = [&](double t) { return -E * hm_g(from + t * dir).imag(); };
        double hi = 0.1;
        while (expo(hi) > std::log(1e-16) && hi < 200.0) hi += 0.1;
        double lo = std::max(0.05, hi - 0.1);
        for (int i = 0; i < 60; ++i) {
            double mid = 0.5 * (lo + hi);
            (expo(mid) > std::log(1e-16) ? lo : hi) = mid;
        }
        return hi;
    };

    // right kite counterclockwise: vertices at 0, pi/3, pi, -pi/3
    add(vtx(a, 0.0), vtx(a, pi / 3.0), 0, 1);
    add(vtx(a, pi / 3.0), vtx(a, pi), 0, 2);
    add(vtx(a, pi), vtx(a, -pi / 3.0), 0, 3);
    add(vtx(a, -pi / 3.0), vtx(a, 0.0), 0, 4);
    // left kite: vertices at 0, 2pi/3, pi, -2pi/3
    add(vtx(-a, 0.0), vtx(-a, 2.0 * pi / 3.0), 1, 1);
    add(vtx(-a, 2.0 * pi / 3.0), vtx(-a, pi), 1, 2);
    add(vtx(-a, pi), vtx(-a, -2.0 * pi / 3.0), 1, 3);
    add(vtx(-a, -2.0 * pi / 3.0), vtx(-a, 0.0), 1, 4);
    // rays outward from the lens vertices
    {
        cx d1 = ray_direction(1) / std::abs(ray_direction(1));
        d1 = std::exp(cx{0.0, pi / 3.0});
        cx v1 = vtx(a, pi / 3.0);
        add(v1, v1 + ray_len(v1, d1) * d1, 2, 1);
        cx d6 = std::exp(cx{0.0, -pi / 3.0});
        cx v6 = vtx(a, -pi / 3.0);
        add(v6, v6 + ray_len(v6, d6) * d6, 2, 6);
        cx d3 = std::exp(cx{0.0, 2.0 * pi / 3.0});
        cx v3 = vtx(-a, 2.0 * pi / 3.0);
        add(v3, v3 + ray_len(v3, d3) * d3, 2, 3);
        cx d4 = std::exp(cx{0.0, -2.0 * pi / 3.0});
        cx v4 = vtx(-a, -2.0 * pi / 3.0);
        add(v4, v4 + ray_len(v4, d4) * d4, 2, 4);
    }
    // segment between the kites
    add(vtx(-a, 0.0), vtx(a, pi), 3, 0);

    std::vector<Kind> kinds = kk;
    p.jump = [kinds, s1, E](int leg, cx z) -> Mat2 {
        const auto& k = kinds[size_t(leg)];
        auto G1hat = [&](cx zz, Side sd) {
            return Mat2{1.0, 0.0, s1 * std::exp(I_unit * E * hm_g(zz, sd)), 1.0};
        };
        auto G3hat = [&](cx zz, Side sd) {
            return Mat2{1.0, 0.0, -s1 * std::exp(I_unit * E * hm_g(zz, sd)), 1.0};
        };
        auto G4hat = [&](cx zz, Side sd) {
            return Mat2{1.0, s1 * std::exp(-I_unit * E * hm_g(zz, sd)), 0.0, 1.0};
        };
        auto G6hat = [&](cx zz, Side sd) {
            return Mat2{1.0, -s1 * std::exp(-I_unit * E * hm_g(zz, sd)), 0.0, 1.0};
        };
        if (k.kind == 2) {
            Side sd = k.hint;
            Mat2 out = hm_psi_out(z, sd, s1);
            Mat2 core;
            switch (k.sector) {
                case 1: core = G1hat(z, sd); break;
                case 6: core = G6hat(z, sd).inverse(); break;  // reversed orientation
                case 3: core = G3hat(z, sd); break;
                default: core = G4hat(z, sd).inverse(); break;  // reversed orientation
            }
            return out * core * out.inverse();
        }
        if (k.kind == 3) {
            // between the kites, written through the minus boundary values
            Mat2 out = hm_psi_out(z, Side::minus, s1);
            cx E2 = std::exp(0.5 * I_unit * E * (hm_g(z, Side::minus) - hm_g(z, Side::plus)));
            Mat2 core{1.0, 0.0, -s1 * E2, 1.0};
            return out * core * out.inverse();
        }
        // kite sides: inside the disks the parametrix is a constant sector
        // factor times e^{i E g sigma3/2}; the outside-to-inside jump is
        // Psi_out e^{-i E g sigma3/2} F^{-1} with
        //   right kite: F = I (east), L(s1) (north), U(-s1) (south)
        //   left kite:  F = I (NE), L(-s1) (NW and SW), [[1,-s1],[-s1,0]] (SE)
        Side sd = k.hint;
        Mat2 F = Mat2::identity();
        if (k.kind == 0) {
            if (k.sector == 2) F = Mat2{1.0, 0.0, s1, 1.0};
            if (k.sector == 3) F = Mat2{1.0, -s1, 0.0, 1.0};
        } else {
            if (k.sector == 2 || k.sector == 3) F = Mat2{1.0, 0.0, -s1, 1.0};
            if (k.sector == 4) F = Mat2{1.0, -s1, -s1, 0.0};
        }
        cx w = std::exp(-0.5 * I_unit * E * hm_g(z, sd));
        return hm_psi_out(z, sd, s1) * Mat2::diag(w, 1.0 / w) * F.inverse();
    };

    return p;
}

cx pii_negative_hm(const StokesTriple& s, double x, int m) {
    RHProblem p = hm_delta_problem(s, x);
    auto pieces = split_into_pieces(p);
    auto comp = scaled_solve(pieces, m);
    cx mom12 = comp.first_moment().a12;
    return 2.0 * std::sqrt(-x) * (mom12 + I_unit * s.s1 * hm_alpha * 0.5);
}

cx pii(const StokesTriple& s, double x, int m) {
    require_valid(s);
    if (std::abs(x) <= 2.5) return pii_undeformed(s, x, m);
    if (x > 0.0) {
        if (std::abs(s.s2) != 0.0)
            throw std::invalid_argument("pii: x > 2.5 needs the s2 = 0 deformation");
        return pii_positive(s, x, m);
    }
    return pii_negative_hm(s, x, m);
}

}  // namespace rhkit
