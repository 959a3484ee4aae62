#pragma once

#include <optional>

#include "rhkit/equilibrium.hpp"
#include "rhkit/rhsolver.hpp"

namespace rhkit {

// Geometry of the deformed contour: lens polylines through two waypoints,
// kite-shaped boundaries around the endpoints whose vertices sit on the lens
// and the real axis, truncated exterior real legs.
struct OPGeometry {
    double a = -1.0, b = 1.0;          // support endpoints
    double lens_height = 0.0;
    cx wp_up, wp_dn;                   // lens waypoints
    double r_a = 0.0, r_b = 0.0;       // kite radii (endpoint scaling applied)
    double theta_a = 0.0;              // lens attachment angle at a
    double theta_b = 0.0;              // arg(wp_up - b), in (pi/2, pi)
    std::vector<cx> kite_a, kite_b;    // vertices, counterclockwise from the real axis

    bool inside_kite_a(cx z) const;
    bool inside_kite_b(cx z) const;
    bool inside_lens_up(cx z) const;
    bool inside_lens_dn(cx z) const;
    // distance from a real point to the recovery breakpoints (endpoints and
    // kite crossings of the axis)
    double breakpoint_distance(double x) const;
};

struct OPOptions {
    int m0 = 40;                 // initial nodes per leg
    int m_max = 320;
    double tol = 1e-10;          // Cauchy error target
    double trunc_tol = 1e-14;
    bool stabilize = true;       // endpoint conjugation for n > 50
    std::optional<double> degenerate_exponent;  // override of the n^{-2/7} scaling
};

// Solved deformed system for the weight e^{-nV}: region-aware recovery of the
// orthogonal polynomial data and the Christoffel-Darboux kernel.
struct OPSystem {
    EquilibriumMeasure eqm;
    int n = 1;
    OPGeometry geo;
    int m_used = 0;
    bool stabilized = false;

    struct Stage {
        RHSolution local;
        cx alpha, beta;
        bool has_kite_a = false, has_kite_b = false;
        Mat2 nbar = Mat2::identity(), nbar_inv = Mat2::identity();
    };
    std::vector<Stage> stages;

    Mat2 N_global(cx z, Side side = Side::plus) const;
    // sector 0 resolves the piecewise case from arg(z - endpoint); the legs
    // pass their own sector (1..4) so junction limits use the correct case
    Mat2 P_a(cx z, Side side = Side::plus, int sector = 0) const;
    Mat2 P_b(cx z, Side side = Side::plus, int sector = 0) const;
    Mat2 lens_factor(cx z, Side side = Side::plus) const;

    Mat2 Phi(cx z, Side side = Side::plus) const;
    Mat2 T(cx z, Side side = Side::plus) const;
    Mat2 Y(cx z, Side side = Side::plus) const;
    Mat2 phi_first_moment() const;  // lim z (Phi - I)

    // monic pi_n and the second-row entire function gamma_{n-1} pi_{n-1}
    cx pi_n(cx z) const;
    cx y21(cx z) const;

    // first-column entries of T e^{-n varphi sigma3}; real on the real line
    double A_raw(double x) const;
    double B_raw(double x) const;

    // gamma_{n-1} in the 2 pi i / ||pi_{n-1}||^2 normalization
    cx gamma_nm1() const;
};

OPSystem solve_op(const Potential& pot, int n, const OPOptions& opt = {});
OPSystem solve_op(const EquilibriumMeasure& eqm, int n, const OPOptions& opt = {});

// the deformed problem alone (for inspection/tests)
RHProblem build_phi_problem(const EquilibriumMeasure& eqm, int n, OPGeometry* geo_out,
                            const OPOptions& opt = {});

// Christoffel-Darboux kernel on a solved system.
struct KernelHandle {
    const OPSystem* sys = nullptr;

    double kernel(double x, double y) const;
    double kernel_diag(double x) const;
};

// smallest per-leg m (stepping by 4 from 8) whose Cauchy error is below tol
int minimal_nodes(const EquilibriumMeasure& eqm, int n, double tol = 1e-10, int m_cap = 96);

}  // namespace rhkit
