#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rhkit/cauchy.hpp"
#include "rhkit/cheb.hpp"
#include "rhkit/types.hpp"

namespace rhkit {

// One oriented affine contour leg.  Orientation runs map.a -> map.b; the plus
// side is to the left of the travel direction.
struct ContourLeg {
    IntervalMap map;
};

// jump evaluator: (leg index, point on that leg) -> 2x2 jump matrix G.
// At shared endpoints it must return the limit along the given leg.
using JumpFn = std::function<Mat2(int, cx)>;

struct RHProblem {
    std::vector<ContourLeg> legs;
    JumpFn jump;
};

// A junction: endpoint shared by one or more legs.
struct JunctionInfo {
    cx point;
    struct Incident {
        int leg;
        Endpoint ep;        // which end of the leg sits here
        double theta;       // emanation angle
    };
    std::vector<Incident> incident;  // sorted by theta
    bool use_zero_sum_row = false;   // nonsingular-junction fallback engaged
};

struct SolveDiagnostics {
    double rcond = 1.0;
    bool condition_warning = false;   // estimated condition number > 1e12
    int fallback_junctions = 0;
};

struct RHSolution {
    std::vector<ContourLeg> legs;
    std::vector<MatChebSeries> U;
    std::vector<JunctionInfo> junctions;
    SolveDiagnostics diag;

    // Phi(z) = I + C_Gamma U(z).  Points on a leg use the one-sided boundary
    // value (plus side by default).
    Mat2 evaluate(cx z, Side side = Side::plus) const;

    // lim z (Phi(z) - I) = -(1/(2 pi i)) sum_legs int U
    Mat2 first_moment() const;

    // residual sum p_i U^i(zeta) at each junction (zero sum condition)
    std::vector<double> zero_sum_residuals() const;
};

// Dense collocation system in row-decoupled form: the two rows of the 2x2
// unknown satisfy the same 2N x 2N system with different right-hand sides.
struct CollocationSystem {
    std::vector<int> node_count;       // per leg
    std::vector<std::vector<cx>> nodes;  // per leg
    // flattened complex matrix, row-major, dimension (2N) x (2N)
    int N = 0;
    std::vector<cx> A;
    std::vector<cx> rhs_row1, rhs_row2;
    std::vector<JunctionInfo> junctions;
    int fallback_junctions = 0;

    void dump_csv(const std::string& path) const;
};

std::vector<JunctionInfo> find_junctions(const RHProblem& p);

// Verifies the cyclic jump product at every junction equals I (1e-10); throws
// on violation.  Detects junctions needing the explicit zero-sum row.
void check_junction_consistency(const RHProblem& p, std::vector<JunctionInfo>& junctions);

CollocationSystem build_system(const RHProblem& p, const std::vector<int>& nodes);

RHSolution solve(const RHProblem& p, const std::vector<int>& nodes);
RHSolution solve(const RHProblem& p, int nodes_per_leg);

// max sample difference between the m and 2m solutions at the 2m nodes
double cauchy_error(const RHProblem& p, int m);

// doubles m until cauchy_error < tol; returns the 2m solution of the last stage
RHSolution solve_adaptive(const RHProblem& p, int m0 = 40, double tol = 1e-10, int m_max = 320,
                          int* m_used = nullptr);

// Shorten or drop legs on which ||G - I|| stays below tol; cut points refined
// by bisection on a 64-interval grid.
RHProblem truncate(const RHProblem& p, double tol);

// Disjoint sub-problems solved sequentially: piece j sees the original jump
// conjugated by the product of the previously solved pieces.
struct ScaledPiece {
    RHProblem problem;     // legs in global coordinates
    cx alpha{1.0};         // local coordinates k with z = alpha k + beta
    cx beta{0.0};
};

struct CompositeSolution {
    struct Stage {
        RHSolution local;   // solution in local coordinates
        cx alpha, beta;
    };
    std::vector<Stage> stages;

    Mat2 evaluate(cx z, Side side = Side::plus) const;  // product of stage values
    Mat2 first_moment() const;                          // sum of stage moments
};

CompositeSolution scaled_solve(const std::vector<ScaledPiece>& pieces, int nodes_per_leg);
CompositeSolution scaled_solve_adaptive(const std::vector<ScaledPiece>& pieces, int m0 = 40,
                                        double tol = 1e-10, int m_max = 320, int* m_used = nullptr);

// split a problem into connected components, each centred and rescaled
std::vector<ScaledPiece> split_into_pieces(const RHProblem& p);

}  // namespace rhkit
