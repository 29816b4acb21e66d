#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "muskat/radial.hpp"

namespace muskat {

// Convention: f^(rho) = int_0^inf f(r) J0(rho r) r dr, f(r) = int_0^inf f^(rho) J0(r rho) rho drho.
inline constexpr const char* kHankelConvention =
    "fhat(rho) = int_0^inf f(r) J0(rho r) r dr; f(r) = int_0^inf fhat(rho) J0(r rho) rho drho; "
    "|f|_{H^t}^2 = 2 pi int rho^(2t+1) |fhat|^2 drho";

// Model for rho > rho_max: f_N (rho/rho_N)^power exp(-rate (rho - rho_N)).
struct HighFrequencyTail {
    enum class Kind { zero, exponential, algebraic };
    Kind kind = Kind::zero;
    double rate = 0.0;
    double power = 0.0;

    // From the last three samples; exponential only when rate * rho_N > 1.
    // Samples below 1e-7 of the peak are treated as noise (zero tail).
    static HighFrequencyTail fit(const RadialGrid& grid, const std::vector<double>& values);
};

class SpectralField {
public:
    SpectralField() = default;
    // low_exponent: f ~ rho^low_exponent below rho_min. Tail fitted from the samples when absent.
    SpectralField(RadialGrid grid, std::vector<double> values, double low_exponent = 0.0,
                  std::optional<HighFrequencyTail> tail = std::nullopt, bool distributional = false);

    static SpectralField sample(const RadialGrid& grid, const std::function<double(double)>& f,
                                double low_exponent = 0.0);
    static SpectralField zero(const RadialGrid& grid);

    double operator()(double rho) const;

    const RadialGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double low_exponent() const { return low_exponent_; }
    const HighFrequencyTail& tail() const { return tail_; }
    // Transform of a growing function: only its derivatives are meaningful pointwise.
    bool distributional() const { return distributional_; }
    bool is_zero() const;

    SpectralField scaled(double c) const;
    // rho^a * f, with both asymptotic models shifted accordingly.
    SpectralField times_power(double a) const;

private:
    RadialGrid grid_;
    std::vector<double> values_;
    double low_exponent_ = 0.0;
    HighFrequencyTail tail_;
    bool distributional_ = false;
    LogCurve curve_;
};

SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator+(const SpectralField& a, const SpectralField& b);

struct SobolevSpec {
    std::vector<double> exponents;
};

// Forward transform of a sampled decaying field.
SpectralField hankel_forward(const RadialField& field, const RadialGrid& freq, double low_exponent = 0.0);

// Forward transform of an exactly known function. `scale` is the length on
// which f varies, `far_power` the algebraic decay rate f ~ r^{-far_power}.
struct ExactFunction {
    std::function<double(double)> f;
    double scale = 1.0;
    double far_power = 1.0;
    double origin_power = 0.0;
};
double hankel_forward_at(const ExactFunction& fn, double rho);
SpectralField hankel_forward(const ExactFunction& fn, const RadialGrid& freq, double low_exponent = 0.0);

// Inverse transform onto the given radii; origin value computed exactly.
RadialField hankel_inverse(const SpectralField& spec, const RadialGrid& radii);
double hankel_inverse_at(const SpectralField& spec, double r);

// Spectrum of the Laplacian of a radial function from its radial derivative:
// (Delta f)^(rho) = rho int f'(r) J1(rho r) r dr.
SpectralField laplacian_spectrum_from_gradient(const RadialField& gradient, const RadialGrid& freq);

double sobolev_seminorm(const SpectralField& spec, double t);
double intersection_norm(const SpectralField& spec, const SobolevSpec& orders);
// (int_{lo}^{hi} rho^{2t+1} |f|^2 drho)^{1/2}, no 2 pi factor.
double weighted_l2(const SpectralField& spec, double t, double lo, double hi);

}  // namespace muskat
