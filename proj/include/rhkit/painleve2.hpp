#pragma once

#include "rhkit/rhsolver.hpp"
#include "rhkit/types.hpp"

namespace rhkit {

// Stokes data (s1, s2, s3) subject to s1 - s2 + s3 + s1 s2 s3 = 0.
struct StokesTriple {
    cx s1, s2, s3;

    cx constraint() const { return s1 - s2 + s3 + s1 * s2 * s3; }
    bool valid(double tol = 1e-12) const { return std::abs(constraint()) <= tol; }
};

// the six ray jumps: G_k for k = 1..6 with s_{k+3} = s_k; entries carry
// e^{+- i (8/3) lam^3 +- 2 i x lam}
std::array<std::function<Mat2(cx)>, 6> stokes_extend(const StokesTriple& s, double x);

// six-ray problem at the origin; |x| <= 2.5
cx pii_undeformed(const StokesTriple& s, double x, int m = 40);

// steepest-descent crosses through +-i/2 (requires s2 = 0), x > 0
cx pii_positive(const StokesTriple& s, double x, int m = 40);

// Hastings-McLeod deformation (requires s1 = -s3 = +-i, s2 = 0), x < 0
cx pii_negative_hm(const StokesTriple& s, double x, int m = 40);

// regime dispatcher: undeformed for |x| <= 2.5, deformed beyond
cx pii(const StokesTriple& s, double x, int m = 40);

// scaled phase (4/3) z^3 + e^{i arg x} z; jump exponents are 2 i |x|^{3/2} theta
cx pii_theta(cx z, double argx);

// outer parametrix data of the negative-x deformation
cx hm_g(cx z, Side side = Side::plus);      // (8/3)(z^2 - 1/2)^{3/2}, cut on the segment
cx hm_beta(cx z, Side side = Side::plus);   // ((z-a)/(z+a))^{1/4}, a = 1/sqrt(2)

// the residual problem of the negative-x deformation (for tests/inspection)
RHProblem hm_delta_problem(const StokesTriple& s, double x);

}  // namespace rhkit
