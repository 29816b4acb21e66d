#include "muskat/profile.hpp"

#include <cmath>

#include "muskat/errors.hpp"

namespace muskat {

LinearProfile::LinearProfile(double slope) : s(slope) {
    if (!(slope >= 0.0) || !std::isfinite(slope)) throw ParameterError("linear profile: slope must be finite and >= 0");
}

double klin_value(const LinearProfile& p, double r) {
    double q = std::hypot(r, 1.0);
    return p.s * (q - std::log1p(q));
}

double klin_gradient(const LinearProfile& p, double r) { return p.s * r / (std::hypot(r, 1.0) + 1.0); }

HessianEntries klin_hessian(const LinearProfile& p, double r) {
    double q = std::hypot(r, 1.0);
    double t = 1.0 / (q + 1.0);
    return {p.s * (t - r * r / (q * (q + 1.0) * (q + 1.0))), p.s * t};
}

double klin_laplacian(const LinearProfile& p, double r) { return p.s / std::hypot(r, 1.0); }

SpectralField klin_laplacian_spectrum(const LinearProfile& p, const RadialGrid& freq) {
    return SpectralField::sample(freq, [&](double rho) { return p.s * std::exp(-rho) / rho; }, -1.0);
}

SpectralField klin_profile_spectrum(const LinearProfile& p, const RadialGrid& freq) {
    std::vector<double> v(freq.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -p.s * std::exp(-freq[i]) / (freq[i] * freq[i] * freq[i]);
    return SpectralField(freq, std::move(v), -3.0, std::nullopt, true);
}

RadialField klin_field(const LinearProfile& p, const RadialGrid& grid) {
    return RadialField::sample(grid, [&](double r) { return klin_value(p, r); }, affine_tail(grid, [&] {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = klin_value(p, grid[i]);
        return v;
    }()));
}

}  // namespace muskat
