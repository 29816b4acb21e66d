#pragma once

#include <string>
#include <vector>

#include "muskat/errors.hpp"
#include "muskat/hankel.hpp"
#include "muskat/nonlinear.hpp"
#include "muskat/polar_quadrature.hpp"
#include "muskat/radial.hpp"

namespace muskat {

struct GridConfig {
    double r_min = 1e-3;
    double r_max = 1e3;
    std::size_t r_count = 241;
    double rho_min = 1e-3;
    double rho_max = 1e3;
    std::size_t rho_count = 241;
};

struct SolverConfig {
    GridConfig grid;
    QuadratureSpec quadrature;
    int max_iterations = 20;
    double tolerance = 1e-8;  // on the relative change of g^ in the monitor norm
    double s = 0.05;
    double t1 = 1.75;
    double s_guard = 0.2;                // larger slopes run with a warning
    double cross_check_tolerance = 1e-2;  // spectral vs physical inverse Laplacian

    // Throws ParameterError for invalid settings.
    void validate() const;
    std::vector<std::string> warnings() const;
    RadialGrid radii() const;
    RadialGrid frequencies() const;
};

double t_star(double t1);
// Orders of the monitor norm: {t* - 2, t1 - 1}.
SobolevSpec monitor_orders(double t1);
// Orders of the gradient norm: {t* - 1, t1}.
SobolevSpec gradient_orders(double t1);

struct IterationRecord {
    int iteration = 0;
    double norm = 0.0;            // |g^_n| in the monitor norm
    double delta = 0.0;           // |g^_n - g^_{n-1}|
    double relative_delta = 0.0;  // delta / norm
    double ratio = 0.0;           // delta_n / delta_{n-1}; NaN when undefined
    double cross_check = 0.0;     // spectral vs physical inverse Laplacian, relative sup
    double quadrature_error = 0.0;
    double seconds = 0.0;
};

// Iterate of the fixed-point scheme: the correction g (a Laplacian) in
// frequency space and its inverse Laplacian J[g] in physical space.
struct ProfileState {
    double s = 0.0;
    double t1 = 1.75;
    double t_star = 1.875;
    SpectralField g_spectral;
    RadialField Jg_physical;
    RadialField Jg_gradient;
    int iteration = 0;
    std::vector<IterationRecord> history;

    // k = k^Lin + J[g] (additive constant fixed to zero).
    ProfileArgument profile() const;
};

ProfileState initial_state(const SolverConfig& config);

// Map from the Laplacian spectrum of T[k] to the new correction:
// g^ = -rho^2 L[T^] with T^ = -psi / rho^2.
SpectralField correction_from_laplacian(const SpectralField& laplacian_T);

// Laplacian spectrum of T[k] on the configured grids.
struct TransformedT {
    GridEvaluation grid;
    SpectralField laplacian;
};
TransformedT transformed_T(const ProfileArgument& k, const SolverConfig& config);

SpectralField forcing_phi(double s, double t1, const SolverConfig& config);

// One application of g -> Delta L T[k^Lin + J g].
ProfileState fixed_point_map(const ProfileState& state, const SolverConfig& config);

// sup |(-rho^2 J^) - g^| / sup |g^| on [lo, hi], with J^ obtained from the
// Hankel transform of the sampled Laplacian of J[g].
double state_consistency(const ProfileState& state, const SolverConfig& config, double lo = 0.05, double hi = 20.0);

struct ResidualReport {
    SpectralField residual;
    double absolute = 0.0;
    double reference = 0.0;  // norm of the Laplacian spectrum of T[k]
    double relative = 0.0;
    double rho_lo = 0.05;
    double rho_hi = 20.0;
};
// Residual of (Lambda - y.grad + 1) k = T[k] for k = k^Lin + J[g], in
// L^2(rho^{1 + 2(t1 - 1)} drho) on [rho_lo, rho_hi].
ResidualReport profile_residual(const ProfileState& state, const SolverConfig& config);
ResidualReport profile_residual(const ProfileState& state, const SpectralField& laplacian_T, const SolverConfig& config);

struct CorrectionNorms {
    double correction_norm = 0.0;  // |g| in H^{t*-2} cap H^{t1-1}
    double gradient_norm = 0.0;    // |grad J g| in H^{t*-1} cap H^{t1}
    double linf_gamma1 = 0.0;      // sup |grad J g| / r^{t1-1}
    double linf_gamma2 = 0.0;      // sup |Hess J g| / r^{t1-2}
    WeightedNormSpec gamma1_window;
    WeightedNormSpec gamma2_window;
};
CorrectionNorms correction_norms(const ProfileState& state);

struct RunDiagnostics {
    bool converged = false;
    int iterations = 0;
    double final_norm = 0.0;
    double final_relative_delta = 0.0;
    double extra_map_change = 0.0;  // relative norm change under one more application
    CorrectionNorms norms;
    ResidualReport residual;
    double seconds = 0.0;
    std::vector<std::string> warnings;
};

struct SolveResult {
    ProfileState state;
    RunDiagnostics diagnostics;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, ProfileState state)
        : Error(what), state_(std::move(state)) {}
    const ProfileState& state() const { return state_; }

private:
    ProfileState state_;
};

SolveResult solve(const SolverConfig& config);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double standard_error = 0.0;
    double ci_low = 0.0;  // 95 % interval
    double ci_high = 0.0;
    double first_window = 0.0;  // slopes over the first / last three points
    double last_window = 0.0;
    bool window_stable = false;
};
// Least squares fit of log y against log x.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepEntry {
    double s = 0.0;
    bool ok = false;
    std::string error;
    int iterations = 0;
    CorrectionNorms norms;
    double residual = 0.0;
};

struct SweepReport {
    std::vector<SweepEntry> entries;
    bool partial = false;
    SlopeFit correction_fit;
    SlopeFit gradient_fit;
    SlopeFit linf_gamma1_fit;
    SlopeFit linf_gamma2_fit;
};
SweepReport sweep_s(const std::vector<double>& s_list, const SolverConfig& config);

}  // namespace muskat
