#include "rhkit/equilibrium.hpp"

#include <algorithm>
#include <cmath>

namespace rhkit {

cx Potential::V(cx z) const {
    if (name == "exp-linear") return std::exp(z) - z;
    cx acc{}, p{1.0};
    for (double c : coeffs) {
        acc += c * p;
        p *= z;
    }
    return acc;
}

cx Potential::dV(cx z) const {
    if (name == "exp-linear") return std::exp(z) - 1.0;
    cx acc{}, p{1.0};
    for (size_t k = 1; k < coeffs.size(); ++k) {
        acc += double(k) * coeffs[k] * p;
        p *= z;
    }
    return acc;
}

Potential Potential::gue() { return Potential{"gue", {0.0, 0.0, 1.0}}; }

Potential Potential::degenerate_quartic() {
    return Potential{"degenerate-quartic", {0.0, 8.0 / 5.0, 1.0 / 5.0, -4.0 / 15.0, 1.0 / 20.0}};
}

Potential Potential::exp_linear() { return Potential{"exp-linear", {}}; }

Potential Potential::poly(std::vector<double> ascending) {
    return Potential{"poly", std::move(ascending)};
}

namespace {

double parse_number(const std::string& tok) {
    auto slash = tok.find('/');
    if (slash == std::string::npos) return std::stod(tok);
    return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
}

}  // namespace

Potential Potential::parse(const std::string& spec) {
    if (spec == "gue") return gue();
    if (spec == "degenerate-quartic") return degenerate_quartic();
    if (spec == "exp-linear") return exp_linear();
    if (spec.rfind("poly:", 0) == 0) {
        std::vector<double> cs;
        std::string rest = spec.substr(5);
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            cs.push_back(parse_number(rest.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        if (cs.empty()) throw std::invalid_argument("empty polynomial potential");
        return poly(std::move(cs));
    }
    throw std::invalid_argument("unknown potential: " + spec);
}

std::vector<double> vk_coefficients(const std::function<cx(cx)>& dV, double a, double b, int m) {
    IntervalMap map{a, b};
    auto pts = cheb_points(m, map);
    std::vector<cx> samples(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) samples[i] = dV(pts[i]);
    auto s = cheb_transform(samples, map);
    std::vector<double> out(s.coeffs.size());
    for (size_t k = 0; k < out.size(); ++k) out[k] = s.coeffs[k].real();
    return out;
}

std::vector<double> vk_coefficients_adaptive(const std::function<cx(cx)>& dV, double a, double b) {
    int m = 17;
    std::vector<double> vk;
    while (true) {
        vk = vk_coefficients(dV, a, b, m);
        double biggest = 0.0;
        for (double v : vk) biggest = std::max(biggest, std::abs(v));
        double tail = std::max(std::abs(vk[m - 1]), std::abs(vk[m - 2]));
        if (biggest == 0.0 || tail <= 1e-14 * biggest || m >= 2048) break;
        m = 2 * (m - 1) + 1;
    }
    double biggest = 0.0;
    for (double v : vk) biggest = std::max(biggest, std::abs(v));
    int keep = int(vk.size());
    while (keep > 2 && std::abs(vk[keep - 1]) < 1e-15 * biggest) --keep;
    vk.resize(keep);
    return vk;
}

namespace {

// F(a,b) = (V_0, (b-a) V_1 - 8)
std::pair<double, double> F_of(const Potential& pot, double a, double b) {
    auto vk = vk_coefficients_adaptive([&](cx z) { return pot.dV(z); }, a, b);
    double v0 = vk.empty() ? 0.0 : vk[0];
    double v1 = vk.size() > 1 ? vk[1] : 0.0;
    return {v0, (b - a) * v1 - 8.0};
}

double norm2(std::pair<double, double> f) { return std::hypot(f.first, f.second); }

}  // namespace

std::pair<double, double> find_support(const Potential& pot, double a0, double b0,
                                       NewtonReport* report) {
    if (!(a0 < b0)) throw std::invalid_argument("find_support: need a0 < b0");
    double a = a0, b = b0;
    auto F = F_of(pot, a, b);
    const double h = 1e-7;
    int it = 0;
    for (; it < 50; ++it) {
        if (norm2(F) < 1e-13) break;
        // Jacobian by finite differences of the coefficient map
        auto Fa = F_of(pot, a + h, b);
        auto Fb = F_of(pot, a, b + h);
        double J11 = (Fa.first - F.first) / h, J12 = (Fb.first - F.first) / h;
        double J21 = (Fa.second - F.second) / h, J22 = (Fb.second - F.second) / h;
        double det = J11 * J22 - J12 * J21;
        if (std::abs(det) < 1e-300) throw std::runtime_error("find_support: singular Jacobian");
        double da = -(J22 * F.first - J12 * F.second) / det;
        double db = -(-J21 * F.first + J11 * F.second) / det;
        double step = 1.0;
        for (int damp = 0; damp < 60; ++damp) {
            double an = a + step * da, bn = b + step * db;
            if (bn - an < 1e-10) {
                step *= 0.5;  // keep the interval ordered
                continue;
            }
            auto Fn = F_of(pot, an, bn);
            if (norm2(Fn) < norm2(F) || step < 1e-6) {
                a = an;
                b = bn;
                F = Fn;
                break;
            }
            step *= 0.5;
        }
    }
    if (report) {
        report->iterations = it;
        report->residual = norm2(F);
    }
    if (norm2(F) > 1e-12)
        throw std::runtime_error("find_support: no convergence, residual " +
                                 std::to_string(norm2(F)) + " at (" + std::to_string(a) + "," +
                                 std::to_string(b) + ")");
    return {a, b};
}

std::pair<double, double> find_support(const Potential& pot, NewtonReport* report) {
    // rescale a symmetric bracket until (b-a) V_1 is the right size
    double s = 1.0;
    for (int i = 0; i < 40; ++i) {
        auto vk = vk_coefficients([&](cx z) { return pot.dV(z); }, -s, s, 33);
        double v1 = vk.size() > 1 ? vk[1] : 0.0;
        double target = 2.0 * s * v1;
        if (target > 16.0) {
            s *= 0.7;
        } else if (target < 4.0) {
            s *= 1.4;
        } else {
            break;
        }
    }
    return find_support(pot, -s, s, report);
}

double chebU(int k, double x) {
    if (k < 0) return 0.0;
    double u0 = 1.0, u1 = 2.0 * x;
    if (k == 0) return u0;
    for (int i = 2; i <= k; ++i) {
        double u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

double EquilibriumMeasure::h_right() const {
    double s = 0.0;
    for (size_t k = 1; k < Vk.size(); ++k) s += double(k) * Vk[k];
    return s;
}

double EquilibriumMeasure::h_left() const {
    // U_{k-1}(-1) = (-1)^{k-1} k
    double s = 0.0;
    for (size_t k = 1; k < Vk.size(); ++k)
        s += double(k) * Vk[k] * ((k % 2 == 1) ? 1.0 : -1.0);
    return s;
}

cx EquilibriumMeasure::w_of(cx z, Side side) const {
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z.real()))) z = cx{z.real(), 0.0};
    IntervalMap map{a, b};
    cx t = map.forward(z);
    if (z.imag() == 0.0 && z.real() >= a && z.real() <= b)
        return inv_joukowski_boundary(std::clamp(t.real(), -1.0, 1.0), side);
    if (z.imag() == 0.0 && z.real() < a) {
        double m = t.real();
        return cx{m + std::sqrt(m * m - 1.0)};  // real value in (-1,0)
    }
    return inv_joukowski_exterior(t);
}

cx EquilibriumMeasure::phi(cx z, Side side) const {
    cx w = w_of(z, side);
    // 1/2 sum_{k>=1} V_k w^k, Horner from the top
    cx acc{};
    for (int k = int(Vk.size()) - 1; k >= 1; --k) acc = (acc + Vk[k]) * w;
    return 0.5 * acc;
}

cx EquilibriumMeasure::g(cx z, Side side) const {
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z.real()))) z = cx{z.real(), 0.0};
    cx w = w_of(z, side);
    cx logw = std::log(w);
    if (z.imag() == 0.0 && z.real() < a)
        logw = cx{std::log(std::abs(w)), side == Side::plus ? -pi : pi};
    cx acc = Vk.size() > 1 ? Vk[1] * (0.5 * w * w - logw) : cx{};
    cx wk = w;  // w^{k-1}
    for (size_t k = 2; k < Vk.size(); ++k) {
        acc += Vk[k] * (wk * w * w / double(k + 1) - wk / double(k - 1));
        wk *= w;
    }
    return (b - a) / 8.0 * acc + std::log((b - a) / 4.0);
}

cx EquilibriumMeasure::varphi(cx z, Side side) const {
    return 0.5 * (pot.V(z) - ell) - g(z, side);
}

double EquilibriumMeasure::density(double x, bool* outside) const {
    if (x < a || x > b) {
        if (outside) *outside = true;
        return 0.0;
    }
    if (outside) *outside = false;
    double t = std::clamp((2.0 * x - a - b) / (b - a), -1.0, 1.0);
    double s = 0.0;
    for (size_t k = 1; k < Vk.size(); ++k) s += Vk[k] * chebU(int(k) - 1, t);
    return std::sqrt(std::max(0.0, 1.0 - t * t)) / (2.0 * pi) * s;
}

double edge_constant(const EquilibriumMeasure& eqm) {
    double h1 = eqm.h_right();
    if (h1 < 1e-8)
        throw std::runtime_error(
            "edge_constant: degenerate right edge; use the degenerate scaling path");
    return std::pow(eqm.b - eqm.a, -1.0 / 3.0) * std::pow(h1, 2.0 / 3.0);
}

EquilibriumMeasure compute_equilibrium(const Potential& pot, double a0, double b0) {
    EquilibriumMeasure eqm;
    eqm.pot = pot;
    auto ab = find_support(pot, a0, b0);
    eqm.a = ab.first;
    eqm.b = ab.second;
    eqm.Vk = vk_coefficients_adaptive([&](cx z) { return pot.dV(z); }, eqm.a, eqm.b);

    // Lagrange constant, checked for consistency across three interior points
    double vals[3];
    int idx = 0;
    for (double q : {0.31, 0.5, 0.72}) {
        double x = eqm.a + q * (eqm.b - eqm.a);
        cx gp = eqm.g(cx{x}, Side::plus), gm = eqm.g(cx{x}, Side::minus);
        vals[idx++] = (pot.V(cx{x}) - gp - gm).real();
    }
    double spread = std::max({vals[0], vals[1], vals[2]}) - std::min({vals[0], vals[1], vals[2]});
    if (spread >= 1e-6)
        throw std::runtime_error("equilibrium: Lagrange constant inconsistent, spread " +
                                 std::to_string(spread));
    eqm.ell = vals[1];

    eqm.c = eqm.degenerate_right() ? 0.0 : edge_constant(eqm);
    return eqm;
}

EquilibriumMeasure compute_equilibrium(const Potential& pot) {
    auto ab = find_support(pot);
    return compute_equilibrium(pot, ab.first - 1e-3, ab.second + 1e-3);
}

}  // namespace rhkit
