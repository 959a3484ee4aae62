#include "rhkit/cauchy.hpp"

#include <algorithm>

namespace rhkit {

namespace {

const cx two_pi_i{0.0, 2.0 * pi};

// 2F1(1,1;c;x) by its Taylor series with term-ratio recurrence.
cx hyp2f1_11(double c, cx x) {
    cx sum{1.0}, term{1.0};
    for (int n = 0; n < 4000; ++n) {
        term *= double(n + 1) * x / (c + double(n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
    }
    return sum;
}

// 2F1(1,b;c;u) Gauss series; used through the Pfaff transform
// 2F1(1,1;c;x) = (1-x)^{-1} 2F1(1,c-1;c;x/(x-1)) when |x| is large.
cx hyp2f1_1b(double b, double c, cx u) {
    cx sum{1.0}, term{1.0};
    for (int n = 0; n < 200000; ++n) {
        term *= (b + double(n)) / (c + double(n)) * u;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
    }
    return sum;
}

// odd harmonic partial sum H(J) = sum_{j=1}^{J} 1/(2j-1)
double odd_harmonic(int J) {
    double s = 0.0;
    for (int j = 1; j <= J; ++j) s += 1.0 / double(2 * j - 1);
    return s;
}

// reduced tail R(J) = sum_{i>=0} w^{2i}/(2J+1+2i), so that
// sum_{j>J} w^{2j-1}/(2j-1) = w^{2J+1} R(J).  Requires |w| < 1.
std::vector<cx> reduced_tails(cx w, int Jmax) {
    cx w2 = w * w;
    std::vector<cx> R(Jmax + 1);
    // direct series seed at Jmax
    cx seed{}, p{1.0};
    double aw2 = std::abs(w2);
    for (int i = 0; i < 200000; ++i) {
        cx term = p / double(2 * Jmax + 1 + 2 * i);
        seed += term;
        p *= w2;
        if (std::abs(p) < 1e-18 * (1.0 - aw2) * double(2 * Jmax + 1)) break;
    }
    R[Jmax] = seed;
    for (int J = Jmax; J >= 1; --J) R[J - 1] = w2 * R[J] + 1.0 / double(2 * J - 1);
    return R;
}

}  // namespace

cx inv_joukowski_exterior(cx z) {
    cx s = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
    cx w = 1.0 / (z + s);
    return w;
}

cx inv_joukowski_boundary(double x, Side side) {
    double r = std::sqrt(std::max(0.0, 1.0 - x)) * std::sqrt(std::max(0.0, 1.0 + x));
    // plus side (limit from the left of the orientation) = lower semicircle
    return side == Side::plus ? cx{x, -r} : cx{x, r};
}

cx mu_poly(int k, cx v) {
    int J = (k + 1) / 2;
    cx s{}, p = v;
    cx v2 = v * v;
    for (int j = 1; j <= J; ++j) {
        s += p / double(2 * j - 1);
        p *= v2;
    }
    return s;
}

std::vector<cx> cauchy_basis_all(int m, const IntervalMap& map, const BasisPointQuery& q) {
    if (m < 1) throw std::invalid_argument("cauchy_basis_all: m >= 1");
    std::vector<cx> out(m);

    if (q.at_endpoint) {
        // finite-part values at a junction
        double logMp = std::log(2.0 / map.length());
        double delta = reduce_angle(q.theta - map.angle());
        const double log2 = std::log(2.0);
        double H1 = 0.0, H2 = 0.0;  // odd harmonic sums for mu_k(1), mu_{k-1}(1)
        for (int k = 0; k < m; ++k) {
            int J1 = (k + 1) / 2, J2 = k / 2;
            H1 = odd_harmonic(J1);
            H2 = odd_harmonic(J2);
            double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            if (q.ep == Endpoint::right) {
                cx r = 1.0 / two_pi_i;
                cx a = -log2 / two_pi_i + (H1 + H2) / (cx{0.0, 1.0} * pi) + r * logMp;
                double argv;
                if (std::abs(std::abs(delta) - pi) < 1e-12) {
                    argv = (q.side == Side::plus) ? pi : -pi;
                } else {
                    argv = reduce_angle(delta);
                }
                out[k] = a + I_unit * r * argv;
            } else {
                cx r = -sgn / two_pi_i;
                cx a = sgn * log2 / two_pi_i - sgn * (H1 + H2) / (cx{0.0, 1.0} * pi) + r * logMp;
                double argv;
                if (std::abs(delta) < 1e-12) {
                    argv = (q.side == Side::plus) ? -pi : pi;
                } else {
                    argv = reduce_angle(delta + pi);
                }
                out[k] = a + I_unit * r * argv;
            }
        }
        return out;
    }

    cx w;
    if (q.on_leg) {
        double t = std::clamp(map.forward(q.z).real(), -1.0, 1.0);
        w = inv_joukowski_boundary(t, q.side);
    } else {
        cx t = map.forward(q.z);
        w = inv_joukowski_exterior(t);
        double aw = std::abs(w);
        if (aw > 1.0 - 1e-9) {
            // snap to the nearest side's boundary value
            w /= aw;
        }
    }

    cx at = std::atanh(w);
    out[0] = -4.0 * at / two_pi_i;
    if (m == 1) return out;

    int Jmax = m / 2 + 1;
    bool subtract = std::abs(w) > 0.995;

    // S_k = w S_{k-1} + (k odd ? 1/k : 0) accumulates w^k mu_k(1/w)
    cx Skm1{}, wk = w;  // S_0 = 0, wk tracks w^k
    std::vector<cx> tailR;
    std::vector<cx> muP;  // partial sums mu(J) at w, for the subtraction path
    cx winv{};
    if (subtract) {
        muP.assign(Jmax + 1, cx{});
        cx p = w, w2 = w * w;
        for (int J = 1; J <= Jmax; ++J) {
            muP[J] = muP[J - 1] + p / double(2 * J - 1);
            p *= w2;
        }
        winv = 1.0 / w;
    } else {
        tailR = reduced_tails(w, Jmax);
    }

    cx wkinv{1.0};  // w^{-k}, subtraction path only
    cx Sk{};
    for (int k = 1; k < m; ++k) {
        Sk = w * Skm1 + ((k % 2 == 1) ? cx{1.0 / double(k)} : cx{});
        int J1 = (k + 1) / 2, J2 = k / 2;
        cx tailpart;
        if (subtract) {
            wkinv *= winv;
            tailpart = wkinv * ((at - muP[J1]) + (at - muP[J2]));
        } else {
            int p1 = 2 * J1 + 1 - k, p2 = 2 * J2 + 1 - k;  // each in {0,1,2}
            auto wp = [&](int p) { return p == 0 ? cx{1.0} : (p == 1 ? w : w * w); };
            tailpart = wp(p1) * tailR[J1] + wp(p2) * tailR[J2];
        }
        out[k] = (Sk + w * Skm1 - 2.0 * wk * at - tailpart) / two_pi_i;
        Skm1 = Sk;
        wk *= w;
    }
    return out;
}

cx cauchy_basis(int k, const IntervalMap& map, cx z) {
    BasisPointQuery q;
    q.z = z;
    return cauchy_basis_all(k + 1, map, q)[k];
}

cx cauchy_basis_boundary(int k, const IntervalMap& map, cx x, Side side) {
    BasisPointQuery q;
    q.z = x;
    q.on_leg = true;
    q.side = side;
    return cauchy_basis_all(k + 1, map, q)[k];
}

cx cauchy_basis_junction(int k, const IntervalMap& map, Endpoint ep, double theta, Side along_side) {
    BasisPointQuery q;
    q.at_endpoint = true;
    q.ep = ep;
    q.theta = theta;
    q.side = along_side;
    return cauchy_basis_all(k + 1, map, q)[k];
}

cx psi_k(int k, cx w) {
    if (std::abs(w - 1.0) < 1e-14 || std::abs(w + 1.0) < 1e-14)
        throw std::domain_error("psi_k: singular at w = +-1");
    const cx pref = 2.0 / (I_unit * pi);
    if (k == 0) return pref * std::atanh(w);

    cx w2 = w * w;
    if (k < 0) {
        int p = (-k) / 2;
        double c = 1.5 + p;
        cx x = w2 / (w2 - 1.0);
        cx F = (std::abs(x) <= 0.8) ? hyp2f1_11(c, x)
                                    : hyp2f1_1b(c - 1.0, c, w2) / (1.0 - x);
        cx num = std::pow(w, 1 + 2 * p + k);
        return pref * num / ((1.0 - w2) * double(1 + 2 * p)) * F;
    }

    int qq = (k + 1) / 2;
    cx xp = 1.0 / (1.0 - w2);
    if (std::abs(xp) <= 0.8) {
        cx at = std::atanh(w);
        cx ati = 0.5 * std::log((w + 1.0) / (w - 1.0));  // arctanh(1/w)
        cx wk = std::pow(w, k);
        cx num = std::pow(w, k - 1 - 2 * qq);
        return pref * (wk * (at - ati) +
                       num / ((1.0 - 1.0 / w2) * double(1 + 2 * qq)) * hyp2f1_11(1.5 + qq, xp));
    }
    // the shifted argument leaves the convergence disk: recover this branch
    // from the pair identity C T_k = -(psi_k + psi_{-k})/2
    cx pair = -2.0 * cauchy_basis(k, IntervalMap{-1.0, 1.0}, 0.5 * (w + 1.0 / w));
    return pair - psi_k(-k, w);
}

}  // namespace rhkit
