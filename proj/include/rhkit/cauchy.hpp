#pragma once

#include <vector>

#include "rhkit/cheb.hpp"
#include "rhkit/types.hpp"

namespace rhkit {

// Sides of an oriented contour leg (plus = left of the travel direction).
enum class Side { plus, minus };
enum class Endpoint { left, right };

// J_+^{-1}(z) = z - sqrt(z-1)sqrt(z+1), the inverse Joukowski branch mapping
// C \ [-1,1] into the closed unit disk.  Computed in the rationalized form
// 1/(z + sqrt(z-1)sqrt(z+1)) which has no large-|z| cancellation.
cx inv_joukowski_exterior(cx z);

// Boundary values on (-1,1): plus side (limit from above) lands on the lower
// unit semicircle, x - i sqrt(1-x)sqrt(1+x).
cx inv_joukowski_boundary(double x, Side side);

// psi_k of the Cauchy-transform basis formula; w strictly inside the unit disk.
// C T_k(z) = -(1/2)[psi_k(w) + psi_{-k}(w)] with w = J_+^{-1}(z).
cx psi_k(int k, cx w);

// Cauchy transform of the mapped basis element T_k(M(.)) over the leg, at a
// point z off the leg: (1/(2 pi i)) \int_leg T_k(M(t)) / (t - z) dt.
cx cauchy_basis(int k, const IntervalMap& map, cx z);

// One-sided boundary value at x strictly inside the leg.
cx cauchy_basis_boundary(int k, const IntervalMap& map, cx x, Side side);

// Finite-part value at an endpoint, approached along direction theta
// (absolute angle).  along_side disambiguates the approach exactly along the
// leg itself; it is ignored otherwise.
cx cauchy_basis_junction(int k, const IntervalMap& map, Endpoint ep, double theta,
                         Side along_side = Side::minus);

// Batch evaluator: values of the Cauchy-transformed basis for k = 0..m-1 at a
// single point.  kind is selected automatically from the geometry:
//   - z off the leg          -> off-contour values
//   - z inside the open leg  -> one-sided boundary values (side)
//   - z at an endpoint       -> junction finite parts (theta, along_side)
struct BasisPointQuery {
    cx z;
    bool on_leg = false;       // interior boundary evaluation
    Side side = Side::minus;
    bool at_endpoint = false;  // junction evaluation
    Endpoint ep = Endpoint::left;
    double theta = 0.0;        // approach angle for junction evaluation
};
std::vector<cx> cauchy_basis_all(int m, const IntervalMap& map, const BasisPointQuery& q);

// mu_k(v) = sum_{j=1}^{floor((k+1)/2)} v^{2j-1}/(2j-1)
cx mu_poly(int k, cx v);

}  // namespace rhkit
