#include "rhkit/oprh.hpp"

#include <algorithm>
#include <memory>

namespace rhkit {

namespace {

bool point_in_polygon(cx z, const std::vector<cx>& poly) {
    bool in = false;
    size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        double yi = poly[i].imag(), yj = poly[j].imag();
        double xi = poly[i].real(), xj = poly[j].real();
        if ((yi > z.imag()) != (yj > z.imag()) &&
            z.real() < (xj - xi) * (z.imag() - yi) / (yj - yi) + xi)
            in = !in;
    }
    return in;
}

cx snap_axis(cx z) {
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z.real()))) return cx{z.real(), 0.0};
    return z;
}

Mat2 nbar_of(double nu0) {
    Mat2 m1{1.0, -I_unit, I_unit, 1.0};
    Mat2 m2{1.0, I_unit, -I_unit, 1.0};
    return (0.5 * nu0) * m1 + (0.5 / nu0) * m2;
}

// piecewise unipotent factors of the endpoint parametrices; sectors are
// 1: (0,theta)  2: (theta,pi)  3: (-pi,-theta)  4: (-theta,0)
Mat2 p_case_a(int sector) {
    switch (sector) {
        case 1: return Mat2::identity();
        case 2: return Mat2{1.0, 0.0, 1.0, 1.0};
        case 3: return Mat2{1.0, -1.0, 1.0, 0.0};
        default: return Mat2{0.0, -1.0, 1.0, 0.0};
    }
}

Mat2 p_case_b(int sector) {
    switch (sector) {
        case 1: return Mat2::identity();
        case 2: return Mat2{1.0, 0.0, -1.0, 1.0};
        case 3: return Mat2{0.0, -1.0, 1.0, 1.0};
        default: return Mat2{1.0, -1.0, 0.0, 1.0};
    }
}

int sector_from_angle(double t, double theta) {
    if (t > 0.0 && t < theta) return 1;
    if (t >= theta && t <= pi) return 2;
    if (t < 0.0 && t > -theta) return 4;
    return 3;
}

}  // namespace

bool OPGeometry::inside_kite_a(cx z) const { return point_in_polygon(z, kite_a); }
bool OPGeometry::inside_kite_b(cx z) const { return point_in_polygon(z, kite_b); }

bool OPGeometry::inside_lens_up(cx z) const {
    return point_in_polygon(z, {cx{a}, wp_up, cx{b}});
}

bool OPGeometry::inside_lens_dn(cx z) const {
    return point_in_polygon(z, {cx{a}, wp_dn, cx{b}});
}

double OPGeometry::breakpoint_distance(double x) const {
    double d = 1e300;
    for (double p : {a, b, a - r_a, a + r_a, b - r_b, b + r_b})
        d = std::min(d, std::abs(x - p));
    return d;
}

Mat2 OPSystem::N_global(cx z, Side side) const {
    z = snap_axis(z);
    double a = eqm.a, b = eqm.b;
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

Mat2 OPSystem::P_a(cx z, Side side, int sector) const {
    z = snap_axis(z);
    if (sector == 0) {
        double t;
        if (z.imag() == 0.0) {
            t = z.real() >= eqm.a ? (side == Side::plus ? 1e-14 : -1e-14)
                                  : (side == Side::plus ? pi : -pi);
        } else {
            t = std::arg(z - eqm.a);
        }
        sector = sector_from_angle(t, geo.theta_a);
    }
    cx e = std::exp(double(n) * eqm.varphi(z, side));
    return p_case_a(sector) * Mat2::diag(e, 1.0 / e);
}

Mat2 OPSystem::P_b(cx z, Side side, int sector) const {
    z = snap_axis(z);
    if (sector == 0) {
        double t;
        if (z.imag() == 0.0) {
            t = z.real() >= eqm.b ? (side == Side::plus ? 1e-14 : -1e-14)
                                  : (side == Side::plus ? pi : -pi);
        } else {
            t = std::arg(z - eqm.b);
        }
        sector = sector_from_angle(t, geo.theta_b);
    }
    cx e = std::exp(double(n) * eqm.varphi(z, side));
    return p_case_b(sector) * Mat2::diag(e, 1.0 / e);
}

Mat2 OPSystem::lens_factor(cx z, Side side) const {
    z = snap_axis(z);
    bool up = false, dn = false;
    if (z.imag() == 0.0 && z.real() > eqm.a && z.real() < eqm.b) {
        up = side == Side::plus;  // boundary value taken from inside the upper lobe
        dn = !up;
    } else if (z.imag() > 0.0) {
        up = geo.inside_lens_up(z);
    } else {
        dn = geo.inside_lens_dn(z);
    }
    if (!up && !dn) return Mat2::identity();
    cx e = std::exp(2.0 * double(n) * eqm.varphi(z, side));
    return up ? Mat2{1.0, 0.0, e, 1.0} : Mat2{1.0, 0.0, -e, 1.0};
}

Mat2 OPSystem::Phi(cx z, Side side) const {
    // stages compose in reverse: Phi = Phi_l ... Phi_2 Phi_1
    Mat2 acc = Mat2::identity();
    for (const auto& st : stages) {
        Mat2 q = st.local.evaluate((z - st.beta) / st.alpha, side);
        bool inside = (st.has_kite_a && geo.inside_kite_a(z)) ||
                      (st.has_kite_b && geo.inside_kite_b(z));
        Mat2 phi = st.nbar * q * (inside ? Mat2::identity() : st.nbar_inv);
        acc = phi * acc;
    }
    return acc;
}

Mat2 OPSystem::phi_first_moment() const {
    Mat2 acc;
    for (const auto& st : stages)
        acc += st.nbar * (st.alpha * st.local.first_moment()) * st.nbar_inv;
    return acc;
}

Mat2 OPSystem::T(cx z, Side side) const {
    Mat2 par;
    if (geo.inside_kite_a(z))
        par = P_a(z, side);
    else if (geo.inside_kite_b(z))
        par = P_b(z, side);
    else
        par = N_global(z, side);
    return Phi(z, side) * par * lens_factor(z, side);
}

Mat2 OPSystem::Y(cx z, Side side) const {
    Mat2 t = T(z, side);
    cx eg = std::exp(double(n) * eqm.g(z, side));
    cx el = std::exp(double(n) * eqm.ell);
    return Mat2{t.a11 * eg, t.a12 / (eg * el), t.a21 * eg * el, t.a22 / eg};
}

cx OPSystem::pi_n(cx z) const {
    return T(z, Side::plus).a11 * std::exp(double(n) * eqm.g(z, Side::plus));
}

cx OPSystem::y21(cx z) const {
    return T(z, Side::plus).a21 * std::exp(double(n) * (eqm.g(z, Side::plus) + eqm.ell));
}

double OPSystem::A_raw(double x) const {
    cx t11 = T(cx{x}, Side::plus).a11;
    return (t11 * std::exp(-double(n) * eqm.varphi(cx{x}, Side::plus))).real();
}

double OPSystem::B_raw(double x) const {
    cx t21 = T(cx{x}, Side::plus).a21;
    return (t21 * std::exp(-double(n) * eqm.varphi(cx{x}, Side::plus))).real();
}

cx OPSystem::gamma_nm1() const {
    Mat2 mom = phi_first_moment();
    cx nmom = I_unit * (eqm.a - eqm.b) / 4.0;  // 1/z coefficient of N_21
    cx gamma_rh = (mom.a21 + nmom) * std::exp(double(n) * eqm.ell);
    return -gamma_rh;
}

RHProblem build_phi_problem(const EquilibriumMeasure& eqm, int n, OPGeometry* geo_out,
                            const OPOptions& opt) {
    if (n < 1) throw std::invalid_argument("build_phi_problem: n >= 1");
    double a = eqm.a, b = eqm.b, mid = 0.5 * (a + b);

    OPGeometry geo;
    geo.a = a;
    geo.b = b;
    geo.lens_height = 0.35 * (b - a);
    // shrink the lens until the arc weight stays bounded by 1
    for (int shrink = 0; shrink < 25; ++shrink) {
        cx wp{mid, geo.lens_height};
        bool ok = true;
        for (int i = 1; i < 24 && ok; ++i) {
            double t = double(i) / 24.0;
            for (cx z : {cx{a} + t * (wp - a), wp + t * (cx{b} - wp)})
                if (eqm.varphi(z, Side::plus).real() > 1e-12) ok = false;
        }
        if (ok) break;
        geo.lens_height *= 0.7;
    }
    geo.wp_up = cx{mid, geo.lens_height};
    geo.wp_dn = cx{mid, -geo.lens_height};

    double r0 = 0.6 * std::min(geo.lens_height, (b - a) / 4.0);
    double expo_a = eqm.degenerate_left() ? opt.degenerate_exponent.value_or(2.0 / 7.0)
                                          : 2.0 / 3.0;
    double expo_b = eqm.degenerate_right() ? opt.degenerate_exponent.value_or(2.0 / 7.0)
                                           : 2.0 / 3.0;
    geo.r_a = r0 * std::pow(double(n), -expo_a);
    geo.r_b = r0 * std::pow(double(n), -expo_b);
    geo.theta_a = std::arg(geo.wp_up - a);
    geo.theta_b = std::arg(geo.wp_up - b);
    geo.kite_a = {cx{a} + geo.r_a, cx{a} + geo.r_a * std::exp(cx{0.0, geo.theta_a}),
                  cx{a} - geo.r_a, cx{a} + geo.r_a * std::exp(cx{0.0, -geo.theta_a})};
    geo.kite_b = {cx{b} + geo.r_b, cx{b} + geo.r_b * std::exp(cx{0.0, geo.theta_b}),
                  cx{b} - geo.r_b, cx{b} + geo.r_b * std::exp(cx{0.0, -geo.theta_b})};

    // exterior legs sized by a conservative scan; truncation trims them
    auto scan_out = [&](double x0, double dir) {
        double step = 0.05 * (b - a), x = x0 + dir * step;
        for (int i = 0; i < 4000; ++i) {
            if (-2.0 * n * eqm.varphi(cx{x}, Side::plus).real() < std::log(1e-18)) break;
            x += dir * step;
        }
        return x;
    };
    double La = scan_out(a - geo.r_a, -1.0);
    double Lb = scan_out(b + geo.r_b, +1.0);

    RHProblem p;
    struct Kind {
        int kind;  // 0 kite_a, 1 kite_b, 2 lens up, 3 lens dn, 4 real
        int sector;
    };
    std::vector<Kind> kinds;
    auto add = [&](cx z1, cx z2, int kind, int sector) {
        p.legs.push_back({IntervalMap{z1, z2}});
        kinds.push_back({kind, sector});
    };

    const auto& ka = geo.kite_a;
    const auto& kb = geo.kite_b;
    add(ka[0], ka[1], 0, 0);
    add(ka[1], ka[2], 0, 1);
    add(ka[2], ka[3], 0, 2);
    add(ka[3], ka[0], 0, 3);
    add(kb[0], kb[1], 1, 0);
    add(kb[1], kb[2], 1, 1);
    add(kb[2], kb[3], 1, 2);
    add(kb[3], kb[0], 1, 3);
    add(ka[1], geo.wp_up, 2, 0);
    add(geo.wp_up, kb[1], 2, 0);
    add(ka[3], geo.wp_dn, 3, 0);
    add(geo.wp_dn, kb[3], 3, 0);
    add(cx{La}, ka[2], 4, 0);
    add(kb[0], cx{Lb}, 4, 0);

    if (geo_out) *geo_out = geo;

    auto sys = std::make_shared<OPSystem>();
    sys->eqm = eqm;
    sys->n = n;
    sys->geo = geo;

    std::vector<Kind> kk = kinds;
    p.jump = [sys, kk, n](int leg, cx z) -> Mat2 {
        const auto& k = kk[leg];
        const EquilibriumMeasure& eqm = sys->eqm;
        if (k.kind == 0 || k.kind == 1) {
            Side side = (k.sector == 0 || k.sector == 1) ? Side::plus : Side::minus;
            Mat2 P = k.kind == 0 ? sys->P_a(z, side, k.sector + 1)
                                 : sys->P_b(z, side, k.sector + 1);
            return sys->N_global(z, side) * P.inverse();
        }
        if (k.kind == 2 || k.kind == 3) {
            Side side = k.kind == 2 ? Side::plus : Side::minus;
            cx e = std::exp(2.0 * double(n) * eqm.varphi(z, side));
            Mat2 N = sys->N_global(z, side);
            return N * Mat2{1.0, 0.0, e, 1.0} * N.inverse();
        }
        cx e = std::exp(-2.0 * double(n) * eqm.varphi(z, Side::plus));
        Mat2 N = sys->N_global(z, Side::plus);
        return N * Mat2{1.0, e, 0.0, 1.0} * N.inverse();
    };
    return p;
}

OPSystem solve_op(const EquilibriumMeasure& eqm, int n, const OPOptions& opt) {
    OPSystem out;
    out.eqm = eqm;
    out.n = n;
    RHProblem full = build_phi_problem(eqm, n, &out.geo, opt);
    RHProblem cut = truncate(full, opt.trunc_tol);
    auto pieces = split_into_pieces(cut);
    bool stab = opt.stabilize && n > 50 && pieces.size() >= 2;
    out.stabilized = stab;

    auto contains_point = [&](const ScaledPiece& pc, cx pt) {
        for (const auto& leg : pc.problem.legs)
            for (cx e : {leg.map.a, leg.map.b})
                if (std::abs(e - pt) < 1e-9 * (1.0 + std::abs(pt))) return true;
        return false;
    };

    int m = opt.m0;
    while (true) {
        std::vector<OPSystem::Stage> try1, try2;
        for (int pass = 0; pass < 2; ++pass) {
            int mm = pass == 0 ? m : 2 * m;
            auto& stages = pass == 0 ? try1 : try2;
            stages.clear();
            stages.reserve(pieces.size());
            for (size_t j = 0; j < pieces.size(); ++j) {
                const auto& pc = pieces[j];
                bool has_a = contains_point(pc, out.geo.kite_a[0]);
                bool has_b = contains_point(pc, out.geo.kite_b[0]);
                Mat2 nbar = Mat2::identity(), nbar_inv = Mat2::identity();
                if (stab && (has_a || has_b)) {
                    double nu0 = 1.0;
                    if (has_a)
                        nu0 = std::abs(std::pow((cx{eqm.a - out.geo.r_a} - eqm.b) /
                                                    cx{-out.geo.r_a},
                                                0.25));
                    else
                        nu0 = std::abs(
                            std::pow(cx{out.geo.r_b} / cx{eqm.b + out.geo.r_b - eqm.a}, 0.25));
                    nbar = nbar_of(nu0);
                    nbar_inv = nbar.inverse();
                }

                RHProblem local;
                cx alpha = pc.alpha, beta = pc.beta;
                for (const auto& leg : pc.problem.legs)
                    local.legs.push_back(
                        {IntervalMap{(leg.map.a - beta) / alpha, (leg.map.b - beta) / alpha}});

                // kite legs get the one-sided wrap (the conjugation applies
                // only outside the kite)
                std::vector<bool> is_kite(pc.problem.legs.size(), false);
                for (size_t l = 0; l < pc.problem.legs.size(); ++l) {
                    cx midp = 0.5 * (pc.problem.legs[l].map.a + pc.problem.legs[l].map.b);
                    is_kite[l] = std::abs(midp - eqm.a) < 1.2 * out.geo.r_a ||
                                 std::abs(midp - eqm.b) < 1.2 * out.geo.r_b;
                }

                JumpFn base = pc.problem.jump;
                const std::vector<OPSystem::Stage>* prev = &stages;
                size_t nprev = stages.size();
                OPGeometry geo = out.geo;
                local.jump = [base, alpha, beta, prev, nprev, geo, nbar, nbar_inv,
                              is_kite](int leg, cx k) -> Mat2 {
                    cx z = alpha * k + beta;
                    Mat2 G = base(leg, z);
                    for (size_t i = 0; i < nprev; ++i) {
                        const auto& st = (*prev)[i];
                        Mat2 q = st.local.evaluate((z - st.beta) / st.alpha);
                        bool inside = (st.has_kite_a && geo.inside_kite_a(z)) ||
                                      (st.has_kite_b && geo.inside_kite_b(z));
                        Mat2 w = st.nbar * q * (inside ? Mat2::identity() : st.nbar_inv);
                        G = w * G * w.inverse();
                    }
                    if (is_kite[size_t(leg)]) return nbar_inv * G;
                    return nbar_inv * G * nbar;
                };

                OPSystem::Stage st;
                st.local = solve(local, mm);
                st.alpha = alpha;
                st.beta = beta;
                st.has_kite_a = has_a;
                st.has_kite_b = has_b;
                st.nbar = nbar;
                st.nbar_inv = nbar_inv;
                stages.push_back(std::move(st));
            }
        }
        double err = 0.0;
        for (size_t j = 0; j < try1.size(); ++j)
            for (size_t lg = 0; lg < try1[j].local.legs.size(); ++lg) {
                auto pts = cheb_points(2 * m, try1[j].local.legs[lg].map);
                for (auto& z : pts)
                    err = std::max(err, (try1[j].local.U[lg].eval(z) -
                                         try2[j].local.U[lg].eval(z))
                                            .norm());
            }
        if (err < opt.tol || m >= opt.m_max) {
            out.stages = std::move(try2);
            out.m_used = m;
            break;
        }
        m *= 2;
    }
    return out;
}

OPSystem solve_op(const Potential& pot, int n, const OPOptions& opt) {
    return solve_op(compute_equilibrium(pot), n, opt);
}

double KernelHandle::kernel(double x, double y) const {
    if (std::abs(x - y) < 1e-8 * (1.0 + std::abs(x))) return kernel_diag(0.5 * (x + y));
    double ax = sys->A_raw(x), bx = sys->B_raw(x);
    double ay = sys->A_raw(y), by = sys->B_raw(y);
    cx val = -(ax * by - bx * ay) / (2.0 * pi * I_unit * (x - y));
    return val.real();
}

double KernelHandle::kernel_diag(double x) const {
    const auto& eqm = sys->eqm;
    double span = eqm.b - eqm.a;
    double width = std::min(0.1 * span, 3.0 * span / sys->n);
    double dbp = sys->geo.breakpoint_distance(x);
    if (dbp > 1e-4 * span) width = std::min(width, 0.8 * dbp);
    width = std::max(width, 1e-4 * span);
    IntervalMap map{x - width, x + width};
    auto pts = cheb_points(32, map);
    std::vector<cx> va(pts.size()), vb(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        va[i] = sys->A_raw(pts[i].real());
        vb[i] = sys->B_raw(pts[i].real());
    }
    ChebSeries A = cheb_transform(va, map), B = cheb_transform(vb, map);
    ChebSeries dA = A.derivative(), dB = B.derivative();
    double a = A.eval(cx{x}).real(), b = B.eval(cx{x}).real();
    double da = dA.eval(cx{x}).real(), db = dB.eval(cx{x}).real();
    cx val = -(da * b - db * a) / (2.0 * pi * I_unit);
    return val.real();
}

int minimal_nodes(const EquilibriumMeasure& eqm, int n, double tol, int m_cap) {
    OPOptions opt;
    RHProblem full = build_phi_problem(eqm, n, nullptr, opt);
    RHProblem cut = truncate(full, opt.trunc_tol);
    auto pieces = split_into_pieces(cut);
    for (int m = 8; m <= m_cap; m += 4) {
        CompositeSolution c1 = scaled_solve(pieces, m);
        CompositeSolution c2 = scaled_solve(pieces, 2 * m);
        double err = 0.0;
        for (size_t j = 0; j < c1.stages.size(); ++j)
            for (size_t lg = 0; lg < c1.stages[j].local.legs.size(); ++lg) {
                auto pts = cheb_points(2 * m, c1.stages[j].local.legs[lg].map);
                for (auto& z : pts)
                    err = std::max(err, (c1.stages[j].local.U[lg].eval(z) -
                                         c2.stages[j].local.U[lg].eval(z))
                                            .norm());
            }
        if (err < tol) return m;
    }
    return m_cap;
}

}  // namespace rhkit
