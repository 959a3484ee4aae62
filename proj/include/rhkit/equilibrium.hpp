#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rhkit/cauchy.hpp"
#include "rhkit/cheb.hpp"
#include "rhkit/types.hpp"

namespace rhkit {

// External field V for the weight e^{-nV}.  Polynomials carry ascending
// coefficients; the named potentials are built in.  V must extend to complex
// arguments (contour deformations evaluate it off the real line).
struct Potential {
    std::string name;             // "poly", "gue", "degenerate-quartic", "exp-linear"
    std::vector<double> coeffs;   // ascending, polynomials only

    cx V(cx z) const;
    cx dV(cx z) const;

    static Potential gue();
    static Potential degenerate_quartic();
    static Potential exp_linear();
    static Potential poly(std::vector<double> ascending);
    // "gue" | "degenerate-quartic" | "exp-linear" | "poly:c0,c1,..." (fractions allowed)
    static Potential parse(const std::string& spec);
};

// Chebyshev-T coefficients of V'(M_{(a,b)}^{-1}(.)), computed from samples at
// the mapped Chebyshev points (trapezium rule on the cosine-transformed
// integrand).
std::vector<double> vk_coefficients(const std::function<cx(cx)>& dV, double a, double b, int m);
std::vector<double> vk_coefficients_adaptive(const std::function<cx(cx)>& dV, double a, double b);

struct NewtonReport {
    int iterations = 0;
    double residual = 0.0;
};

// Support endpoints: Newton root of F(a,b) = (V_0, (b-a)V_1 - 8).
std::pair<double, double> find_support(const Potential& pot, double a0, double b0,
                                       NewtonReport* report = nullptr);
// initial bracket chosen by rescaling (-1,1) until (b-a) V_1 is near 8
std::pair<double, double> find_support(const Potential& pot, NewtonReport* report = nullptr);

struct EquilibriumMeasure {
    Potential pot;
    double a = -1.0, b = 1.0;
    std::vector<double> Vk;   // coefficients of V' o M^{-1}
    double ell = 0.0;         // Lagrange constant
    double c = 0.0;           // edge scaling constant (right edge), 0 if degenerate

    // h(+-1) = sum_k k V_k T'-type endpoint values of the density polynomial
    double h_right() const;
    double h_left() const;
    bool degenerate_right() const { return std::abs(h_right()) < 1e-8; }
    bool degenerate_left() const { return std::abs(h_left()) < 1e-8; }

    // w = J_+^{-1}(M(z)); side selects the boundary branch on [a,b]
    cx w_of(cx z, Side side = Side::plus) const;

    // phi = g': phi_+ + phi_- = V' on (a,b), phi ~ 1/z
    cx phi(cx z, Side side = Side::plus) const;

    // g ~ log z at infinity; cut on (-inf, b]; g_+ - g_- = 2 pi i on (-inf, a)
    cx g(cx z, Side side = Side::plus) const;

    // varphi = (V - ell)/2 - g; the exponential weight in the deformed jumps
    cx varphi(cx z, Side side = Side::plus) const;

    // equilibrium density, 0 outside [a,b] (outside flag reported if non-null)
    double density(double x, bool* outside = nullptr) const;
};

// Full construction: support + coefficients + ell + edge constant.
EquilibriumMeasure compute_equilibrium(const Potential& pot);
EquilibriumMeasure compute_equilibrium(const Potential& pot, double a0, double b0);

// c = (b-a)^{-1/3} [sum k V_k]^{2/3}; throws for a degenerate right edge
// (degenerate endpoints take the n^{-2/7} scaling path instead).
double edge_constant(const EquilibriumMeasure& eqm);

// Chebyshev polynomial of the second kind
double chebU(int k, double x);

}  // namespace rhkit
