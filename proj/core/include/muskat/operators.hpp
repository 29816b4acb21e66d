#pragma once

#include <functional>

#include "muskat/hankel.hpp"
#include "muskat/nonlinear.hpp"
#include "muskat/polar_quadrature.hpp"
#include "muskat/radial.hpp"

namespace muskat {

// C(sigma) in Lambda^sigma f = C(sigma) PV int (f(x) - f(x - alpha)) / |alpha|^{2+sigma} dalpha,
// computed as 1 / int (1 - cos z1) / |z|^{2+sigma} dz and cached per sigma.
struct FracLaplacianConstant {
    double sigma;
    double c_sigma;
};
FracLaplacianConstant frac_laplacian_constant(double sigma);

// Multiply by rho^sigma.
SpectralField frac_laplacian_spectral(const SpectralField& spec, double sigma);

// Radial function for the principal-value forms: f on [0, inf) tending to far_value.
struct RadialFunction {
    std::function<double(double)> f;
    double far_value = 0.0;
};
RadialFunction as_function(const RadialField& field);

QuadratureSpec pv_quadrature();

// Lambda^sigma f(r) by polar principal-value quadrature, sigma in (0, 1.5].
// When the refinement check fails, n_theta is doubled up to three times
// before AccuracyError is thrown.
OperatorValue frac_laplacian_pv(const RadialFunction& f, double sigma, double r, const QuadratureSpec& q = pv_quadrature());
OperatorValue frac_laplacian_pv(const RadialField& field, double sigma, double r,
                                const QuadratureSpec& q = pv_quadrature());

// -C(sigma) PV int delta f delta g / |alpha|^{2+sigma}: equals
// Lambda^sigma(fg) - f Lambda^sigma g - g Lambda^sigma f.
OperatorValue frac_product_defect_pv(const RadialFunction& f, const RadialFunction& g, double sigma, double r,
                                     const QuadratureSpec& q = pv_quadrature());

// J[phi](r) = int_0^r (1/rho) int_0^rho tau phi(tau) dtau drho, nested quadrature.
RadialField inverse_laplacian_J(const RadialField& phi);

// J from the spectrum phi^: int phi^(rho) (1 - J0(r rho)) / rho drho, so J(0) = 0.
RadialField inverse_laplacian_spectral(const SpectralField& phi_hat, const RadialGrid& radii);
// d/dr of the above: int phi^(rho) J1(r rho) drho.
RadialField inverse_laplacian_spectral_gradient(const SpectralField& phi_hat, const RadialGrid& radii);

// (L f)(rho) = rho^{-3} int_0^rho u^2 e^{u - rho} f(u) du.
SpectralField resolvent_L(const SpectralField& f);

// Spectral residual of Delta((Lambda - y.grad + 1) k) - Delta(target), both
// arguments given as Laplacian spectra: e^{-rho} d/drho(rho e^rho Dk^) - Dt^.
SpectralField linear_part_residual(const SpectralField& laplacian_k, const SpectralField& laplacian_target);

}  // namespace muskat
