#pragma once

#include "rhkit/equilibrium.hpp"
#include "rhkit/rhsolver.hpp"
#include "rhkit/types.hpp"

namespace rhkit {

struct AiryPair {
    cx Ai, dAi;
};

// Ai(z) and Ai'(z) for complex z: Maclaurin series inside |z| <= 5.5,
// asymptotic series beyond, rotated through the connection identity near the
// negative real axis.
AiryPair airy(cx z);

// Model 2x2 matrix built from Airy functions.  Four entire sector functions
// related by constant unipotent factors so that the ray jumps are
//   arg 0      : [[1,1],[0,1]]
//   arg 2pi/3  : [[1,0],[1,1]]   (oriented inward)
//   arg pi     : [[0,1],[-1,0]]  (oriented inward)
//   arg -2pi/3 : [[1,0],[1,1]]   (oriented inward)
// sector 1: arg in (0, 2pi/3), 2: (2pi/3, pi), 3: (-pi, -2pi/3), 4: (-2pi/3, 0)
Mat2 airy_model_psi(cx s, int sector);
Mat2 airy_model_psi(cx s);  // sector from arg s

// Local parametrix data at the endpoints of a symmetric one-interval
// equilibrium measure (V even).
struct AiryParametrix {
    EquilibriumMeasure eqm;
    int n = 1;
    double edge = 1.0;  // right endpoint
    double eps = 0.25;  // disk radius (fixed fraction of the edge)

    cx Lambda(cx z, Side side = Side::plus) const;   // (3/2) varphi (z-a)^{-3/2}
    cx lambda_map(cx z, Side side = Side::plus) const;  // (z-a) Lambda^{2/3}
    Mat2 N_global(cx z, Side side = Side::plus) const;

    // psi at the right endpoint; the sector formula is chosen from arg(z-a)
    // with boundaries {0, 2pi/3, pi, -2pi/3} (region argument overrides it)
    Mat2 psi_right(cx z, Side side = Side::plus, int region = 0) const;
    // sigma3 psi_right(-z) sigma3
    Mat2 psi_left(cx z, Side side = Side::plus, int region = 0) const;

    // sup of ||psi N^{-1} - I|| over the kite boundary around +-edge
    double matching_sup(bool left) const;
};

AiryParametrix build_local_parametrix(const Potential& pot_even, int n, double eps_factor = 0.25);

// The near-identity residual problem: parametrix quotient on kites around the
// endpoints, lens arcs and exterior real legs outside them.
struct ErrorProblem {
    AiryParametrix par;
    RHProblem problem;
    // the parametrix: N outside the disks, psi_{+-} inside
    Mat2 hat_psi(cx z, Side side = Side::plus) const;
    // sup over all leg nodes of ||J - I||
    double jump_deviation(int samples_per_leg = 24) const;
};

ErrorProblem error_problem(const Potential& pot_even, int n);

// (n, cauchy error between the 10- and 20-point solutions) per requested n
std::vector<std::pair<int, double>> cauchy_error_experiment(const Potential& pot_even,
                                                            const std::vector<int>& ns);

}  // namespace rhkit
