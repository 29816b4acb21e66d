#pragma once

#include <functional>
#include <vector>

namespace muskat {

enum class BesselKernel { j0, j1, one_minus_j0 };

// Description of a real integrand f on (0, inf).
struct IntegrandModel {
    enum class Far { none, exponential, algebraic };

    std::function<double(double)> f;   // valid on (0, inf)
    std::vector<double> breakpoints;   // increasing, > 0; f smooth between them
    double origin_power = 0.0;         // f(u) ~ u^origin_power as u -> 0
    Far far = Far::none;               // behaviour beyond breakpoints.back()
    double far_rate = 0.0;             // exponential: f ~ e^{-rate u}
    double far_power = 0.0;            // algebraic: f ~ u^{-far_power}
};

// Integral of f(u) K(k u) u^m over (0, inf).
// Oscillatory parts use Gauss-Legendre with the exact Bessel function for
// moderate arguments and a Legendre-Filon rule on the asymptotic amplitude
// for large ones; algebraic far fields are summed by half-periods and
// accelerated with Wynn's epsilon algorithm.
double bessel_integral(const IntegrandModel& model, BesselKernel kernel, double k, int m);

}  // namespace muskat
