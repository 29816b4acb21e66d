#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "muskat/hankel.hpp"
#include "muskat/nonlinear.hpp"
#include "muskat/operators.hpp"
#include "muskat/profile.hpp"
#include "muskat/quadrature.hpp"
#include "muskat/radial.hpp"

namespace muskat::cli {

namespace {

CheckResult check(const std::string& name, double measured, double tolerance, const SuiteOptions& opt,
                  std::string note = {}) {
    double tol = opt.tolerance ? *opt.tolerance : tolerance;
    return {name, measured, tol, measured < tol, std::move(note)};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// log-uniform sample radii drawn from the seed, sorted
std::vector<double> sample_radii(std::uint64_t seed, int n, double lo, double hi) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    std::vector<double> r(n);
    for (double& x : r) x = std::exp(u(gen));
    std::sort(r.begin(), r.end());
    return r;
}

ExactFunction inverse_root() { return {[](double r) { return 1.0 / std::sqrt(1.0 + r * r); }, 1.0, 1.0, 0.0}; }
ExactFunction gaussian() { return {[](double r) { return std::exp(-r * r); }, 1.0, 50.0, 0.0}; }

// Lambda^sigma f at r through forward transform, multiplier and inverse transform.
double spectral_power(const ExactFunction& f, double sigma, double r) {
    RadialGrid freq(1e-4, 60.0, 321);
    SpectralField spec = hankel_forward(f, freq, f.far_power == 1.0 ? -1.0 : 0.0);
    return hankel_inverse_at(frac_laplacian_spectral(spec, sigma), r);
}

// g = amplitude / (1 + r^2) sampled with its exact gradient; dense so that
// interpolation noise stays below the quadrature tolerance
ProfileArgument test_perturbation(double amplitude) {
    RadialGrid grid(1e-3, 1e3, 961);
    RadialField g = RadialField::sample(grid, [&](double r) { return amplitude / (1.0 + r * r); }, {0.0, 0.0, 2.0});
    RadialField dg = RadialField::sample(
        grid, [&](double r) { return -2.0 * amplitude * r / ((1.0 + r * r) * (1.0 + r * r)); }, {0.0, 0.0, 3.0},
        Parity::odd);
    return ProfileArgument(std::move(g), std::move(dg));
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<CheckResult> selftest_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    {
        double worst = 0.0;
        const RadialGrid anchors(0.05, 20.0, 61);
        for (double rho : anchors.nodes())
            worst = std::max(worst, rel(hankel_forward_at(inverse_root(), rho), std::exp(-rho) / rho));
        out.push_back(check("hankel_pair", worst, 1e-5, opt, "transform of 1/sqrt(r^2+1) vs e^-rho/rho"));
    }
    {
        RadialGrid grid(1e-3, 1e3, 241);
        RadialField phi = RadialField::sample(grid, [](double r) { return 1.0 / std::sqrt(1.0 + r * r); }, {0, 0, 1});
        RadialField J = inverse_laplacian_J(phi);
        LinearProfile k(1.0);
        double worst = std::abs(J(0.0));
        const RadialGrid probes(1e-3, 100.0, 201);
        for (double r : probes.nodes())
            worst = std::max(worst, std::abs(J(r) - (klin_value(k, r) - (1.0 - std::log(2.0)))));
        out.push_back(check("inverse_laplacian_identity", worst, 1e-5, opt, "J[1/sqrt(r^2+1)] vs k_1 - (1 - log 2)"));
    }
    {
        RadialGrid grid(1e-3, 60.0, 241);
        double worst = 0.0;
        for (int which = 0; which < 2; ++which) {
            auto f = [which](double u) { return which == 0 ? u : std::exp(-u) / u; };
            SpectralField L = resolvent_L(SpectralField::sample(grid, f, which == 0 ? 1.0 : -1.0));
            const auto& v = L.values();
            // integrated form between neighbouring nodes, both sides scaled by e^{-r_{j+1}}
            const GaussRule& gl = gauss_legendre(32);
            for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
                const double a = grid[j], b = grid[j + 1];
                double lhs = b * b * b * v[j + 1] - a * a * a * std::exp(a - b) * v[j];
                double rhs = 0.0;
                for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                    double u = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
                    rhs += 0.5 * (b - a) * gl.weights[q] * u * u * std::exp(u - b) * f(u);
                }
                worst = std::max(worst, rel(lhs, rhs));
            }
        }
        out.push_back(check("resolvent_ode", worst, 1e-4, opt, "d/dr(r^3 e^r L[f]) = r^2 e^r f"));
    }
    {
        RadialGrid freq(1e-3, 1e3, 241);
        SpectralField res = linear_part_residual(klin_laplacian_spectrum(LinearProfile(1.0), freq),
                                                 SpectralField::zero(freq));
        out.push_back(check("linear_profile_residual", weighted_l2(res, 0.75, 0.05, 20.0), 1e-6, opt,
                            "(Lambda - y.grad + 1) k_lin is constant"));
    }
    {
        RadialFunction f{[](double r) { return std::exp(-r * r); }, 0.0};
        RadialFunction g{[](double r) { return std::pow(1.0 + r * r, -1.5); }, 0.0};
        RadialFunction fg{[](double r) { return std::exp(-r * r) * std::pow(1.0 + r * r, -1.5); }, 0.0};
        double worst = 0.0;
        for (double r : {0.2, 0.7, 1.5}) {
            double lhs = frac_laplacian_pv(fg, 1.0, r).value - f.f(r) * frac_laplacian_pv(g, 1.0, r).value -
                         g.f(r) * frac_laplacian_pv(f, 1.0, r).value;
            double rhs = frac_product_defect_pv(f, g, 1.0, r).value;
            worst = std::max(worst, rel(lhs, rhs));
        }
        out.push_back(check("commutator_identity", worst, 1e-4, opt, "Lambda(fg) - f Lambda g - g Lambda f"));
    }
    return out;
}

std::vector<CheckResult> operators_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    {
        double c = frac_laplacian_constant(1.0).c_sigma;
        out.push_back(check("constant_sigma_1", rel(c, 0.5 / std::numbers::pi), 1e-8, opt, "C(1) = 1/(2 pi)"));
    }
    {
        std::vector<double> radii = sample_radii(opt.seed, 3, 0.1, 10.0);
        double worst = 0.0;
        for (const ExactFunction& f : {inverse_root(), gaussian()})
            for (double r : radii)
                worst = std::max(worst, rel(frac_laplacian_pv(RadialFunction{f.f, 0.0}, 1.0, r).value,
                                            spectral_power(f, 1.0, r)));
        out.push_back(check("pv_vs_spectral_lambda", worst, 1e-3, opt, "two test functions, sigma = 1"));
    }
    {
        RadialGrid grid(1e-3, 1e3, 241);
        double worst = 0.0;
        // relative error where phi is not swamped by cancellation in f'' + f'/r
        auto gauss = [](double r) { return std::exp(-r * r); };
        auto root = [](double r) { return 1.0 / std::sqrt(1.0 + r * r); };
        RadialField lap_g = radial_laplacian(inverse_laplacian_J(RadialField::sample(grid, gauss)));
        RadialField lap_r = radial_laplacian(inverse_laplacian_J(RadialField::sample(grid, root, {0, 0, 1})));
        for (std::size_t i = 4; i + 4 < grid.size(); ++i) {
            if (grid[i] <= 2.0) worst = std::max(worst, rel(lap_g.values()[i], gauss(grid[i])));
            worst = std::max(worst, rel(lap_r.values()[i], root(grid[i])));
        }
        out.push_back(check("laplacian_of_inverse", worst, 1e-4, opt, "Delta J[phi] = phi, two test functions"));
    }
    {
        RadialFunction f{[](double r) { return std::exp(-r * r); }, 0.0};
        RadialFunction g{[](double r) { return std::pow(1.0 + r * r, -1.5); }, 0.0};
        ExactFunction fg{[](double r) { return std::exp(-r * r) * std::pow(1.0 + r * r, -1.5); }, 1.0, 50.0, 0.0};
        double worst = 0.0;
        for (double r : sample_radii(opt.seed + 1, 5, 0.1, 3.0)) {
            double lhs = spectral_power(fg, 1.0, r) - f.f(r) * spectral_power({g.f, 1.0, 3.0, 0.0}, 1.0, r) -
                         g.f(r) * spectral_power(gaussian(), 1.0, r);
            double rhs = frac_product_defect_pv(f, g, 1.0, r).value;
            worst = std::max(worst, rel(lhs, rhs));
        }
        out.push_back(check("commutator_spectral_vs_pv", worst, 1e-2, opt, "five seeded radii"));
    }
    return out;
}

std::vector<CheckResult> nonlinear_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    const QuadratureSpec& q = opt.quadrature;
    LinearProfile k(0.1);
    std::vector<double> radii = sample_radii(opt.seed, 5, 1e-2, 100.0);
    std::vector<double> base;
    for (double r : radii) base.push_back(evaluate_T(k, k, r, q).value);
    {
        QuadratureSpec wide = q;
        wide.a_max *= 2.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i)
            worst = std::max(worst, rel(evaluate_T(k, k, radii[i], wide).value, base[i]));
        out.push_back(check("outer_cutoff_doubling", worst, 1e-5, opt));
    }
    {
        QuadratureSpec fine = q;
        fine.a_min *= 0.5;
        double worst = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i)
            worst = std::max(worst, rel(evaluate_T(k, k, radii[i], fine).value, base[i]));
        out.push_back(check("inner_cutoff_halving", worst, 1e-6, opt));
    }
    {
        QuadratureSpec raw = q;
        raw.symmetrize = false;
        raw.check_accuracy = false;
        QuadratureSpec raw_wide = raw;
        raw_wide.a_max *= 2.0;
        double change = rel(evaluate_T(k, k, 1.0, raw_wide).value, evaluate_T(k, k, 1.0, raw).value);
        // inverted sense: the unpaired sum must visibly move
        out.push_back(check("unpaired_tail_detected", 1e-5 / change, 1.0, opt, "unpaired change " + std::to_string(change)));
    }
    {
        std::vector<double> s{0.02, 0.04, 0.08}, v;
        for (double si : s) v.push_back(evaluate_T(LinearProfile(si), LinearProfile(si), 1.0, q).value);
        out.push_back(check("T_slope_in_s", std::abs(fitted_slope(s, v) - 3.0), 0.1, opt));
    }
    {
        std::vector<double> s{0.02, 0.04, 0.08}, v;
        for (double si : s) {
            LinearProfile p(si);
            v.push_back(evaluate_R(p, p, p, p, 1.0, q).value);
        }
        out.push_back(check("R_slope_in_s", std::abs(fitted_slope(s, v) - 5.0), 0.2, opt));
    }
    {
        double worst = 0.0;
        for (double r : {0.3, 1.0, 4.0})
            worst = std::max(worst, rel(evaluate_T(LinearProfile(2.5 * k.s), k, r, q).value,
                                        2.5 * evaluate_T(k, k, r, q).value));
        out.push_back(check("first_slot_linearity", worst, 1e-9, opt));
    }
    return out;
}

std::vector<CheckResult> taylor_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    const QuadratureSpec& q = opt.quadrature;
    LinearProfile k(0.5);
    ProfileArgument g = test_perturbation(0.1);
    const std::vector<double> radii{0.5, 1.0, 2.0};
    {
        double worst = 0.0;
        for (double r : radii) worst = std::max(worst, std::abs(evaluate_T_ge2(ProfileArgument(), k, r, q).value));
        out.push_back(check("T_ge2_of_zero", worst, 1e-300, opt, "exact zero"));
    }
    {
        // first-order error of the difference quotient
        double worst = 0.0;
        for (double r : radii) {
            double t0 = evaluate_T(k, k, r, q).value;
            double t1 = evaluate_T1(g, k, r, q).value;
            double e[2];
            int i = 0;
            for (double eps : {1e-2, 1e-3}) {
                ProfileArgument moved = ProfileArgument(k) + g.scaled(eps);
                e[i++] = std::abs((evaluate_T(moved, moved, r, q).value - t0) / eps - t1);
            }
            worst = std::max(worst, std::abs(std::log10(e[0] / e[1]) - 1.0));
        }
        out.push_back(check("T1_directional_derivative_order", worst, 0.2, opt, "error ratio over a decade of eps"));
    }
    {
        std::vector<double> eps{0.05, 0.1, 0.2}, v;
        for (double e : eps) {
            ProfileArgument ge = g.scaled(e);
            double m = 0.0;
            for (double r : radii) m = std::max(m, std::abs(evaluate_T_ge2(ge, k, r, q).value));
            v.push_back(m);
        }
        out.push_back(check("T_ge2_quadratic_slope", std::abs(fitted_slope(eps, v) - 2.0), 0.15, opt));
    }
    {
        double worst = 0.0;
        const double tau = 1e-2;
        for (double r : radii) {
            ProfileArgument up = ProfileArgument(k) + g.scaled(tau);
            ProfileArgument down = ProfileArgument(k) + g.scaled(-tau);
            double fd = (evaluate_T(up, up, r, q).value - 2.0 * evaluate_T(k, k, r, q).value +
                         evaluate_T(down, down, r, q).value) /
                        (tau * tau);
            double formula = -3.0 / (2.0 * std::numbers::pi) *
                             (2.0 * evaluate_Q(g, g, k, k, r, q).value + evaluate_Q(k, g, g, k, r, q).value -
                              5.0 * evaluate_R(k, g, g, k, r, q).value);
            worst = std::max(worst, rel(fd, formula));
        }
        out.push_back(check("second_derivative_identity", worst, 5e-2, opt));
    }
    return out;
}

std::string format_table(const std::vector<CheckResult>& results) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %14s %12s  %s\n", "check", "measured", "tolerance", "verdict");
    out << line;
    for (const CheckResult& c : results) {
        std::snprintf(line, sizeof line, "%-34s %14.6e %12.3e  %s\n", c.name.c_str(), c.measured, c.tolerance,
                      c.pass ? "PASS" : "FAIL");
        out << line;
    }
    return out.str();
}

bool all_pass(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.pass; });
}

}  // namespace muskat::cli
