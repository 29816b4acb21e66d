#pragma once

#include "muskat/hankel.hpp"
#include "muskat/radial.hpp"

namespace muskat {

// k(r) = s (sqrt(r^2+1) - log(sqrt(r^2+1) + 1)), the explicit solution of the
// linearised profile equation.
struct LinearProfile {
    double s = 0.0;
    explicit LinearProfile(double slope);
};

double klin_value(const LinearProfile& p, double r);
double klin_gradient(const LinearProfile& p, double r);

struct HessianEntries {
    double radial;      // d^2k/dr^2
    double transverse;  // k'(r)/r
};
HessianEntries klin_hessian(const LinearProfile& p, double r);
double klin_laplacian(const LinearProfile& p, double r);

// Laplacian spectrum s e^{-rho}/rho.
SpectralField klin_laplacian_spectrum(const LinearProfile& p, const RadialGrid& freq);
// Profile spectrum -s e^{-rho}/rho^3 (distributional; norms exist only for t > 2).
SpectralField klin_profile_spectrum(const LinearProfile& p, const RadialGrid& freq);

RadialField klin_field(const LinearProfile& p, const RadialGrid& grid);

}  // namespace muskat
