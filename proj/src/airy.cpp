#include "rhkit/airy.hpp"

#include <algorithm>

namespace rhkit {

namespace {

const cx omega = std::exp(cx{0.0, 2.0 * pi / 3.0});

AiryPair airy_maclaurin(cx z) {
    static const double c1 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    static const double c2 = std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    if (std::abs(z) == 0.0) return {cx{c1}, cx{-c2}};
    cx z3 = z * z * z;
    cx f{1.0}, g = z, fp{}, gp{1.0};
    double alpha = 1.0, beta = 1.0;
    cx zf{1.0}, zg = z;
    for (int k = 0; k < 400; ++k) {
        alpha /= double((3 * k + 2) * (3 * k + 3));
        beta /= double((3 * k + 3) * (3 * k + 4));
        zf *= z3;
        zg *= z3;
        cx tf = alpha * zf, tg = beta * zg;
        f += tf;
        g += tg;
        fp += tf * double(3 * k + 3) / z;
        gp += tg * double(3 * k + 4) / z;
        if (std::abs(tf) + std::abs(tg) < 1e-18 * (std::abs(f) + std::abs(g))) break;
    }
    return {c1 * f - c2 * g, c1 * fp - c2 * gp};
}

AiryPair airy_asymptotic(cx z) {
    cx zeta = (2.0 / 3.0) * std::pow(z, 1.5);
    cx inv = 1.0 / zeta;
    cx su{1.0}, sv{1.0};
    double u = 1.0;
    cx p{1.0};
    double prev = 1e300;
    for (int k = 0; k < 60; ++k) {
        double unext = u * (6.0 * k + 5.0) * (6.0 * k + 1.0) / (72.0 * (k + 1.0));
        double vnext = -unext * (6.0 * k + 7.0) / (6.0 * k + 5.0);
        p *= -inv;
        double mag = unext * std::abs(p);
        if (mag > prev) break;  // past the optimal truncation point
        su += unext * p;
        sv += vnext * p;
        prev = mag;
        u = unext;
        if (mag < 1e-18) break;
    }
    cx pref = std::exp(-zeta) / (2.0 * std::sqrt(pi));
    cx z14 = std::pow(z, 0.25);
    return {pref / z14 * su, -pref * z14 * sv};
}

}  // namespace

AiryPair airy(cx z) {
    if (std::abs(z) <= 5.5) return airy_maclaurin(z);
    if (std::abs(std::arg(z)) <= 2.0 * pi / 3.0) return airy_asymptotic(z);
    // connection identity Ai(z) + w Ai(wz) + w^2 Ai(w^2 z) = 0 rotates the
    // evaluation into the asymptotic sector
    cx zw = omega * z, zw2 = omega * omega * z;
    AiryPair a1 = airy_asymptotic(zw);
    AiryPair a2 = airy_asymptotic(zw2);
    cx Ai = -(omega * a1.Ai + omega * omega * a2.Ai);
    cx dAi = -(omega * omega * a1.dAi + omega * a2.dAi);
    return {Ai, dAi};
}

Mat2 airy_model_psi(cx s, int sector) {
    // solution columns y_j = (Ai(w^j s), d/ds Ai(w^j s)); each sector pairs the
    // two solutions that stay numerically clean there.  The pairs are related
    // by the connection identity, which makes the ray jumps
    //   Psi_1 = Psi_4 U(1),  Psi_1 = Psi_2 L(1),  Psi_2 = Psi_3 R,
    //   Psi_3 = Psi_4 L(1)
    // exact identities rather than floating-point sums.
    auto y0 = [&] {
        AiryPair p = airy(s);
        return std::pair<cx, cx>{p.Ai, p.dAi};
    };
    auto y1 = [&] {
        AiryPair p = airy(omega * s);
        return std::pair<cx, cx>{p.Ai, omega * p.dAi};
    };
    auto y2 = [&] {
        AiryPair p = airy(omega * omega * s);
        return std::pair<cx, cx>{p.Ai, omega * omega * p.dAi};
    };
    Mat2 A;
    switch (sector) {
        case 1: {
            auto c1 = y0();
            auto c2 = y2();
            A = Mat2{c1.first, c2.first, c1.second, c2.second};
            break;
        }
        case 2: {
            auto c1 = y1();
            auto c2 = y2();
            A = Mat2{-omega * c1.first, c2.first, -omega * c1.second, c2.second};
            break;
        }
        case 3: {
            auto c1 = y2();
            auto c2 = y1();
            cx e3 = std::exp(cx{0.0, pi / 3.0});
            A = Mat2{e3 * c1.first, e3 * c2.first, e3 * c1.second, e3 * c2.second};
            break;
        }
        case 4: {
            auto c1 = y0();
            auto c2 = y1();
            A = Mat2{c1.first, -omega * omega * c2.first, c1.second, -omega * omega * c2.second};
            break;
        }
        default: throw std::invalid_argument("airy_model_psi: sector 1..4");
    }
    cx e = std::exp(cx{0.0, -pi / 6.0});
    return A * Mat2::diag(e, 1.0 / e);
}

Mat2 airy_model_psi(cx s) {
    double t = std::arg(s);
    int sector;
    if (t > 2.0 * pi / 3.0)
        sector = 2;
    else if (t > 0.0)
        sector = 1;
    else if (t > -2.0 * pi / 3.0)
        sector = 4;
    else
        sector = 3;
    return airy_model_psi(s, sector);
}

cx AiryParametrix::Lambda(cx z, Side side) const {
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z.real()))) z = cx{z.real(), 0.0};
    cx vf = eqm.varphi(z, side);
    cx pw;
    if (z.imag() == 0.0 && z.real() < edge) {
        double r = edge - z.real();
        pw = std::pow(r, -1.5) * std::exp(cx{0.0, side == Side::plus ? -1.5 * pi : 1.5 * pi});
    } else {
        pw = std::pow(z - edge, -1.5);
    }
    return 1.5 * vf * pw;
}

cx AiryParametrix::lambda_map(cx z, Side side) const {
    if (std::abs(z - edge) < 1e-14 * edge) return cx{};
    return (z - edge) * std::pow(Lambda(z, side), 2.0 / 3.0);
}

Mat2 AiryParametrix::N_global(cx z, Side side) const {
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z.real()))) z = cx{z.real(), 0.0};
    double a = -edge, b = edge;
    cx nu;
    if (z.imag() == 0.0 && z.real() > a && z.real() < b) {
        double r = std::pow((b - z.real()) / (z.real() - a), 0.25);
        nu = r * std::exp(cx{0.0, side == Side::plus ? pi / 4.0 : -pi / 4.0});
    } else {
        nu = std::pow((z - b) / (z - a), 0.25);
    }
    Mat2 m1{1.0, I_unit, -I_unit, 1.0};
    Mat2 m2{1.0, -I_unit, I_unit, 1.0};
    return (1.0 / (2.0 * nu)) * m1 + (0.5 * nu) * m2;
}

Mat2 AiryParametrix::psi_right(cx z, Side side, int region) const {
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z.real()))) z = cx{z.real(), 0.0};
    if (region == 0) {
        double t;
        if (z.imag() == 0.0) {
            bool beyond = z.real() >= edge;
            if (beyond)
                region = side == Side::plus ? 1 : 4;
            else
                region = side == Side::plus ? 2 : 3;
        } else {
            t = std::arg(z - edge);
            if (t > 2.0 * pi / 3.0)
                region = 2;
            else if (t > 0.0)
                region = 1;
            else if (t > -2.0 * pi / 3.0)
                region = 4;
            else
                region = 3;
        }
    }
    double n23 = std::pow(double(n), 2.0 / 3.0);
    cx s = n23 * lambda_map(z, side);
    Mat2 Psi = airy_model_psi(s, region);
    cx vf = eqm.varphi(z, side);
    cx lam23 = std::pow(Lambda(z, side), 2.0 / 3.0);
    cx arg14 = std::pow((z + edge) * lam23, 0.25);
    double n16 = std::pow(double(n), 1.0 / 6.0);
    Mat2 pref{1.0, -1.0, -I_unit, -I_unit};
    Mat2 Lz = pref * (std::sqrt(pi) * std::exp(cx{0.0, pi / 6.0})) *
              Mat2::diag(n16 * arg14, 1.0 / (n16 * arg14));
    return Lz * Psi * Mat2::diag(std::exp(double(n) * vf), std::exp(-double(n) * vf));
}

Mat2 AiryParametrix::psi_left(cx z, Side side, int region) const {
    Side flipped = side == Side::plus ? Side::minus : Side::plus;
    int mirrored = 0;
    if (region != 0) {
        switch (region) {  // z -> -z shifts the angular region by pi
            case 1: mirrored = 3; break;
            case 2: mirrored = 4; break;
            case 3: mirrored = 1; break;
            case 4: mirrored = 2; break;
        }
    }
    Mat2 p = psi_right(-z, flipped, mirrored);
    return Mat2{p.a11, -p.a12, -p.a21, p.a22};
}

double AiryParametrix::matching_sup(bool left) const {
    double worst = 0.0;
    double c0 = left ? -edge : edge;
    const double angR[5] = {0.0, 2.0 * pi / 3.0, pi, -2.0 * pi / 3.0, 0.0};
    const double angL[5] = {0.0, pi / 3.0, pi, -pi / 3.0, 0.0};
    const double* ang = left ? angL : angR;
    for (int sgm = 0; sgm < 4; ++sgm) {
        cx v1 = c0 + eps * std::exp(cx{0.0, ang[sgm]});
        cx v2 = c0 + eps * std::exp(cx{0.0, ang[sgm + 1]});
        for (int i = 1; i < 10; ++i) {
            double t = double(i) / 10.0;
            cx z = v1 + t * (v2 - v1);
            Side side = z.imag() >= 0.0 ? Side::plus : Side::minus;
            Mat2 psi = left ? psi_left(z, side, 0) : psi_right(z, side, 0);
            Mat2 R = psi * N_global(z, side).inverse() - Mat2::identity();
            worst = std::max(worst, R.norm());
        }
    }
    return worst;
}

AiryParametrix build_local_parametrix(const Potential& pot_even, int n, double eps_factor) {
    for (size_t k = 1; k < pot_even.coeffs.size(); k += 2)
        if (pot_even.coeffs[k] != 0.0)
            throw std::invalid_argument("build_local_parametrix: potential must be even");
    AiryParametrix par;
    par.eqm = compute_equilibrium(pot_even);
    if (std::abs(par.eqm.a + par.eqm.b) > 1e-8)
        throw std::invalid_argument("build_local_parametrix: support not symmetric");
    par.n = n;
    par.edge = par.eqm.b;
    par.eps = eps_factor * par.edge;
    return par;
}

ErrorProblem error_problem(const Potential& pot_even, int n) {
    ErrorProblem ep;
    ep.par = build_local_parametrix(pot_even, n);
    const AiryParametrix& par = ep.par;
    double a = par.edge, eps = par.eps;
    double h = 0.7 * a;  // lens waypoint height

    auto vR = [&](double t) {
        cx d = std::exp(cx{0.0, t});
        if (std::abs(d.imag()) < 1e-15) d = cx{d.real() > 0 ? 1.0 : -1.0, 0.0};
        return cx{a} + eps * d;
    };
    auto vL = [&](double t) {
        cx d = std::exp(cx{0.0, t});
        if (std::abs(d.imag()) < 1e-15) d = cx{d.real() > 0 ? 1.0 : -1.0, 0.0};
        return cx{-a} + eps * d;
    };
    cx wpU{0.0, h}, wpD{0.0, -h};

    RHProblem& p = ep.problem;
    struct LegKind {
        int kind;    // 0 kite-right, 1 kite-left, 2 lens-up, 3 lens-down, 4 real
        int region;  // psi sector used on kite legs
    };
    std::vector<LegKind> kinds;
    auto add = [&](cx z1, cx z2, int kind, int region) {
        p.legs.push_back({IntervalMap{z1, z2}});
        kinds.push_back({kind, region});
    };

    // kites counterclockwise (plus side inside)
    add(vR(0.0), vR(2.0 * pi / 3.0), 0, 1);
    add(vR(2.0 * pi / 3.0), vR(pi), 0, 2);
    add(vR(pi), vR(-2.0 * pi / 3.0), 0, 3);
    add(vR(-2.0 * pi / 3.0), vR(0.0), 0, 4);
    add(vL(0.0), vL(pi / 3.0), 1, 1);
    add(vL(pi / 3.0), vL(pi), 1, 2);
    add(vL(pi), vL(-pi / 3.0), 1, 3);
    add(vL(-pi / 3.0), vL(0.0), 1, 4);
    // lens arcs through the waypoints
    add(vL(pi / 3.0), wpU, 2, 0);
    add(wpU, vR(2.0 * pi / 3.0), 2, 0);
    add(vL(-pi / 3.0), wpD, 3, 0);
    add(wpD, vR(-2.0 * pi / 3.0), 3, 0);
    // exterior real legs, cut where the jump entry dies
    double L = a + eps + 0.05 * a;
    while (L < a + 50.0 * a) {
        if (-2.0 * n * par.eqm.varphi(cx{L}, Side::plus).real() < std::log(1e-16)) break;
        L += 0.05 * a;
    }
    add(cx{-L}, vL(pi), 4, 0);
    add(vR(0.0), cx{L}, 4, 0);

    int nn = n;
    AiryParametrix parc = par;
    std::vector<LegKind> kk = kinds;
    p.jump = [parc, kk, nn](int leg, cx z) -> Mat2 {
        const auto& k = kk[leg];
        const EquilibriumMeasure& eqm = parc.eqm;
        if (k.kind == 0 || k.kind == 1) {
            Side s2 = (k.region == 1 || k.region == 2) ? Side::plus : Side::minus;
            Mat2 psi = k.kind == 0 ? parc.psi_right(z, s2, k.region)
                                   : parc.psi_left(z, s2, k.region);
            return parc.N_global(z, s2) * psi.inverse();
        }
        Side side = z.imag() > 0.0 ? Side::plus : (z.imag() < 0.0 ? Side::minus : Side::plus);
        Mat2 N = parc.N_global(z, side);
        if (k.kind == 2 || k.kind == 3) {
            cx e = std::exp(2.0 * double(nn) * eqm.varphi(z, side));
            return N * Mat2{1.0, 0.0, e, 1.0} * N.inverse();
        }
        cx e = std::exp(-2.0 * double(nn) * eqm.varphi(z, Side::plus));
        return N * Mat2{1.0, e, 0.0, 1.0} * N.inverse();
    };
    return ep;
}

Mat2 ErrorProblem::hat_psi(cx z, Side side) const {
    if (std::abs(z - par.edge) < par.eps) return par.psi_right(z, side, 0);
    if (std::abs(z + par.edge) < par.eps) return par.psi_left(z, side, 0);
    return par.N_global(z, side);
}

double ErrorProblem::jump_deviation(int samples_per_leg) const {
    double worst = 0.0;
    for (size_t i = 0; i < problem.legs.size(); ++i) {
        for (int s = 0; s <= samples_per_leg; ++s) {
            double t = -1.0 + 2.0 * s / samples_per_leg;
            cx z = problem.legs[i].map.inverse(cx{t});
            worst = std::max(worst, (problem.jump(int(i), z) - Mat2::identity()).norm());
        }
    }
    return worst;
}

std::vector<std::pair<int, double>> cauchy_error_experiment(const Potential& pot_even,
                                                            const std::vector<int>& ns) {
    std::vector<std::pair<int, double>> out;
    for (int n : ns) {
        ErrorProblem ep = error_problem(pot_even, n);
        out.emplace_back(n, cauchy_error(ep.problem, 10));
    }
    return out;
}

}  // namespace rhkit
