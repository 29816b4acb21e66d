#pragma once

#include <cstddef>
#include <vector>

namespace muskat {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule with n points; rules are built once and shared.
const GaussRule& gauss_legendre(int n);

// Wynn epsilon extrapolation of a sequence of partial sums.
// Returns the best estimate and an error indicator (difference of the
// last two extrapolants).
struct Extrapolation {
    double value;
    double error;
};
Extrapolation wynn_epsilon(const std::vector<double>& partial_sums);

// Legendre polynomials P_0..P_{n-1} at t.
void legendre_values(double t, int n, double* out);

// Hankel asymptotic factors: J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - (2 nu + 1) pi / 4. Valid for large x (x >= ~30).
void bessel_asymptotic_pq(int nu, double x, double& p, double& q);

// Composite rule on a uniform grid with 4th-order end corrections
// (weights 17/48, 59/48, 43/48, 49/48 at each end). Needs n >= 8.
double uniform_grid_integral(const std::vector<double>& f, double h);

}  // namespace muskat
