#include <doctest.h>

#include <cmath>
#include <numbers>

#include "muskat/errors.hpp"
#include "muskat/operators.hpp"
#include "muskat/profile.hpp"
#include "oracles.hpp"

using namespace muskat;

namespace {
const RadialGrid kRadii(1e-3, 1e3, 241);
const RadialGrid kFreq(1e-3, 1e3, 241);

double inv_root(double r) { return 1.0 / std::sqrt(1.0 + r * r); }
// -Laplacian of 1 / sqrt(1 + r^2)
double minus_lap_inv_root(double r) { return (2.0 - r * r) * std::pow(1.0 + r * r, -2.5); }
}  // namespace

TEST_CASE("fractional Laplacian constant") {
    // int (1 - cos z1) / |z|^3 dz = int_0^{2pi} (pi/2) |cos theta| dtheta
    double integral = oracle::integrate([](double th) { return 0.5 * M_PI * std::abs(std::cos(th)); }, 0.0,
                                        2 * M_PI, 64);
    CHECK(frac_laplacian_constant(1.0).c_sigma == doctest::Approx(1.0 / integral).epsilon(1e-10));
    // closed form 2^s Gamma(1 + s/2) / (pi |Gamma(-s/2)|) for the plane
    for (double s : {0.5, 1.0, 1.5}) {
        double closed = std::pow(2.0, s) * std::tgamma(1.0 + 0.5 * s) / (M_PI * std::abs(std::tgamma(-0.5 * s)));
        CHECK(frac_laplacian_constant(s).c_sigma == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("spectral fractional Laplacian") {
    SpectralField e = SpectralField::sample(kFreq, [](double rho) { return std::exp(-rho); });
    SpectralField l1 = frac_laplacian_spectral(e, 1.0);
    for (std::size_t j = 0; j < kFreq.size(); j += 10)
        CHECK(l1.values()[j] == doctest::Approx(kFreq[j] * std::exp(-kFreq[j])).epsilon(1e-14).scale(1e-300));
    SpectralField l0 = frac_laplacian_spectral(e, 0.0);
    for (std::size_t j = 0; j < kFreq.size(); ++j) CHECK(l0.values()[j] == e.values()[j]);

    // Lambda^2 of the inverse root is -Laplacian
    SpectralField f = SpectralField::sample(kFreq, [](double rho) { return std::exp(-rho) / rho; }, -1.0);
    RadialGrid probe(0.05, 10.0, 21);
    RadialField back = hankel_inverse(frac_laplacian_spectral(f, 2.0), probe);
    for (std::size_t i = 0; i < probe.size(); ++i)
        CHECK(std::abs(back.values()[i] - minus_lap_inv_root(probe[i])) < 1e-6);
}

TEST_CASE("principal-value fractional Laplacian") {
    RadialFunction f{inv_root, 0.0};
    // Lambda (1 + r^2)^{-1/2} = (1 + r^2)^{-3/2}: inverse transform of e^{-rho}
    for (double r : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        double pv = frac_laplacian_pv(f, 1.0, r).value;
        CHECK(pv == doctest::Approx(std::pow(1.0 + r * r, -1.5)).epsilon(1e-5));
        ExactFunction ef{inv_root, 1.0, 1.0, 0.0};
        SpectralField spec = hankel_forward(ef, RadialGrid(1e-4, 60.0, 321), -1.0);
        CHECK(hankel_inverse_at(frac_laplacian_spectral(spec, 1.0), r) == doctest::Approx(pv).epsilon(1e-3));
    }
    RadialFunction c{[](double) { return 4.0; }, 4.0};
    CHECK(std::abs(frac_laplacian_pv(c, 1.0, 0.7).value) < 1e-12);
    CHECK_THROWS_AS(frac_laplacian_pv(f, 1.9, 1.0), ParameterError);
}

TEST_CASE("principal value resolves a bump far from the evaluation point") {
    // Lambda e^{-r^2} = int rho^2 e^{-rho^2/4} J0(rho r) drho / 2
    RadialFunction gauss{[](double r) { return std::exp(-r * r); }, 0.0};
    for (double r : {5.0, 10.0}) {
        double exact = oracle::integrate(
            [r](double rho) { return 0.5 * rho * rho * std::exp(-0.25 * rho * rho) * std::cyl_bessel_j(0.0, rho * r); },
            0.0, 16.0, 256);
        CHECK(frac_laplacian_pv(gauss, 1.0, r).value == doctest::Approx(exact).epsilon(1e-6));
    }
    QuadratureSpec strict = pv_quadrature();
    strict.rtol = 1e-16;
    strict.atol = 0.0;
    CHECK_THROWS_AS(frac_laplacian_pv(gauss, 1.0, 10.0, strict), AccuracyError);
}

TEST_CASE("product defect identity") {
    RadialFunction f{[](double r) { return std::exp(-r * r); }, 0.0};
    RadialFunction g{[](double r) { return std::pow(1.0 + r * r, -1.5); }, 0.0};
    RadialFunction fg{[&](double r) { return f.f(r) * g.f(r); }, 0.0};
    for (double r : {0.2, 1.0, 2.0}) {
        double lhs = frac_laplacian_pv(fg, 1.0, r).value - f.f(r) * frac_laplacian_pv(g, 1.0, r).value -
                     g.f(r) * frac_laplacian_pv(f, 1.0, r).value;
        CHECK(frac_product_defect_pv(f, g, 1.0, r).value == doctest::Approx(lhs).epsilon(1e-6));
    }
}

TEST_CASE("inverse Laplacian in physical space") {
    SUBCASE("inverse root gives the linear profile") {
        const double s = 0.3;
        RadialField phi = RadialField::sample(kRadii, [&](double r) { return s * inv_root(r); }, {0, 0, 1});
        RadialField J = inverse_laplacian_J(phi);
        LinearProfile k(s);
        CHECK(std::abs(J(0.0)) < 1e-5);
        for (std::size_t i = 0; i < kRadii.size() && kRadii[i] <= 100.0; ++i)
            CHECK(std::abs(J.values()[i] - (klin_value(k, kRadii[i]) - s * (1.0 - std::log(2.0)))) < 1e-5);
    }
    SUBCASE("zero") { CHECK(inverse_laplacian_J(RadialField::sample(kRadii, [](double) { return 0.0; })).is_zero()); }
    SUBCASE("radial Laplacian recovers the source") {
        // compared where phi is not dominated by cancellation in f'' + f'/r
        auto gauss = [](double r) { return std::exp(-r * r); };
        auto root = [](double r) { return 0.3 * inv_root(r); };
        RadialField lap_g = radial_laplacian(inverse_laplacian_J(RadialField::sample(kRadii, gauss)));
        RadialField lap_r = radial_laplacian(inverse_laplacian_J(RadialField::sample(kRadii, root, {0, 0, 1})));
        for (std::size_t i = 4; i + 4 < kRadii.size(); ++i) {
            if (kRadii[i] <= 2.0) CHECK(std::abs(lap_g.values()[i] / gauss(kRadii[i]) - 1.0) < 1e-4);
            CHECK(std::abs(lap_r.values()[i] / root(kRadii[i]) - 1.0) < 1e-4);
        }
    }
}

TEST_CASE("inverse Laplacian in frequency space") {
    // J[e^{-rho}/rho] = k_1 - (1 - log 2), gradient r / (sqrt(1 + r^2) + 1)
    SpectralField phi = klin_laplacian_spectrum(LinearProfile(1.0), kFreq);
    RadialGrid probe(1e-2, 100.0, 41);
    RadialField J = inverse_laplacian_spectral(phi, probe);
    RadialField dJ = inverse_laplacian_spectral_gradient(phi, probe);
    LinearProfile k(1.0);
    for (std::size_t i = 0; i < probe.size(); ++i) {
        CHECK(std::abs(J.values()[i] - (klin_value(k, probe[i]) - (1.0 - std::log(2.0)))) < 2e-3);
        CHECK(std::abs(dJ.values()[i] - klin_gradient(k, probe[i])) < 1e-4);
    }
}

TEST_CASE("resolvent kernel") {
    SUBCASE("closed form for f = u") {
        SpectralField L = resolvent_L(SpectralField::sample(kFreq, [](double u) { return u; }, 1.0));
        CHECK(L(2.0) == doctest::Approx((8.0 - 12.0 + 12.0 - 6.0 + 6.0 * std::exp(-2.0)) / 8.0).epsilon(1e-7));
        CHECK(L(2.0) == doctest::Approx(0.351501462).epsilon(1e-8));
        for (double r : {0.05, 0.5, 5.0, 50.0}) {
            double closed = (r * r * r - 3 * r * r + 6 * r - 6 + 6 * std::exp(-r)) / (r * r * r);
            CHECK(L(r) == doctest::Approx(closed).epsilon(1e-6));
        }
    }
    SUBCASE("zero") { CHECK(resolvent_L(SpectralField::zero(kFreq)).is_zero()); }
    SUBCASE("ODE in integrated form") {
        const RadialGrid grid(1e-3, 60.0, 241);
        const auto& gl = gauss_legendre(32);
        for (int which = 0; which < 2; ++which) {
            auto f = [which](double u) { return which == 0 ? u : std::exp(-u) / u; };
            SpectralField L = resolvent_L(SpectralField::sample(grid, f, which == 0 ? 1.0 : -1.0));
            double worst = 0.0;
            for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
                const double a = grid[j], b = grid[j + 1];
                double lhs = b * b * b * L.values()[j + 1] - a * a * a * std::exp(a - b) * L.values()[j];
                double rhs = 0.0;
                for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                    double u = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
                    rhs += 0.5 * (b - a) * gl.weights[q] * u * u * std::exp(u - b) * f(u);
                }
                worst = std::max(worst, std::abs(lhs / rhs - 1.0));
            }
            CHECK(worst < 1e-4);
        }
    }
    SUBCASE("bounded between weighted spaces, stable under refinement") {
        const double t1 = 1.75;
        auto f = [](double u) { return u * u * std::exp(-u); };
        for (double t : {t1 + 0.25, t1 + 1.0}) {
            double ratio[2];
            for (int level = 0; level < 2; ++level) {
                RadialGrid grid(1e-3, 1e3, level == 0 ? 241 : 481);
                SpectralField in = SpectralField::sample(grid, f, 2.0);
                ratio[level] = weighted_l2(resolvent_L(in), t, 1e-3, 1e3) / weighted_l2(in, t1, 1e-3, 1e3);
            }
            CHECK(std::isfinite(ratio[0]));
            CHECK(ratio[1] == doctest::Approx(ratio[0]).epsilon(1e-4));
        }
    }
    SUBCASE("too few frequencies") {
        CHECK_THROWS_AS(resolvent_L(SpectralField::sample(RadialGrid(1, 2, 3), [](double u) { return u; })),
                        ParameterError);
    }
}

TEST_CASE("linear part residual") {
    SUBCASE("linear profile solves the homogeneous equation") {
        SpectralField res = linear_part_residual(klin_laplacian_spectrum(LinearProfile(0.4), kFreq),
                                                 SpectralField::zero(kFreq));
        CHECK(weighted_l2(res, 0.75, 0.05, 20.0) < 1e-6);
    }
    SUBCASE("resolvent image solves the forced equation") {
        // k = J[Delta L h], target h, in Laplacian representation; the residual
        // is a finite-difference error and must shrink under refinement
        auto relative = [](std::size_t n) {
            RadialGrid freq(1e-3, 1e3, n);
            SpectralField h = SpectralField::sample(freq, [](double rho) { return std::exp(-0.5 * rho * rho); });
            SpectralField lap_k = resolvent_L(h).times_power(2.0).scaled(-1.0);
            SpectralField lap_h = h.times_power(2.0).scaled(-1.0);
            return weighted_l2(linear_part_residual(lap_k, lap_h), 0.75, 0.05, 20.0) / weighted_l2(lap_h, 0.75, 0.05, 20.0);
        };
        const double coarse = relative(241), fine = relative(481);
        CHECK(coarse < 1e-3);
        CHECK(coarse / fine > 8.0);
    }
    SUBCASE("zero input") {
        SpectralField res = linear_part_residual(SpectralField::zero(kFreq), SpectralField::zero(kFreq));
        CHECK(res.is_zero());
    }
    SUBCASE("grids must agree") {
        CHECK_THROWS_AS(linear_part_residual(SpectralField::zero(kFreq), SpectralField::zero(RadialGrid(1e-2, 1e2, 50))),
                        ParameterError);
    }
}
