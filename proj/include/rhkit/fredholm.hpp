#pragma once

#include <cstdint>
#include <functional>

#include "rhkit/oprh.hpp"

namespace rhkit {

// Gauss-Legendre nodes and weights on (-1,1); Newton on the recurrence.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w);

struct DeterminantResult {
    double value = 1.0;
    int m = 0;           // quadrature size of the reported value
    double err_est = 0;  // |value_m - value_{m/2}|
};

using KernelFn = std::function<double(double, double)>;

// Nystrom-type determinant det(I - K) on L^2(lo, hi): the value at 2m nodes
// with the m-node result as the error estimate.
DeterminantResult fredholm_det(const KernelFn& K, double lo, double hi, int m);

// sinc kernel sin(x-y)/(x-y) on (-s, s)
DeterminantResult sine_det(double s, int m = 60);

// Airy kernel (Ai(x)Ai'(y) - Ai'(x)Ai(y))/(x-y) on (s, infinity); the domain
// is cut where the Airy envelope drops below 1e-16
DeterminantResult airy_det(double s, int m = 100);

struct GapQuery {
    enum class Kind { plain, bulk, edge };
    Kind kind = Kind::plain;
    double x = 0.0;  // bulk centre
    double s = 0.0;  // half width (plain/bulk) or edge offset
    bool use_asymptotic_density = false;  // bulk scale by n psi(x) instead of K_n(x,x)
};

DeterminantResult gap_statistic(const KernelHandle& K, const GapQuery& q, int m = 80);

// samples (x, K_n(x,x)/n)
std::vector<std::pair<double, double>> level_density(const KernelHandle& K,
                                                     const std::vector<double>& grid);

// Eigenvalues of trials x (n x n) Hermitian samples with density
// proportional to e^{-n tr M^2}; deterministic counter-based generator.
std::vector<std::vector<double>> gue_sample(int n, int trials, std::uint64_t seed);

}  // namespace rhkit
