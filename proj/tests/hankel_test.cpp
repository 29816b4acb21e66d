#include <doctest.h>

#include <cmath>
#include <random>

#include "muskat/errors.hpp"
#include "muskat/hankel.hpp"
#include "oracles.hpp"

using namespace muskat;

namespace {
const RadialGrid kRadii(1e-3, 1e3, 241);
const RadialGrid kFreq(1e-3, 1e3, 241);

ExactFunction gaussian() { return {[](double r) { return std::exp(-0.5 * r * r); }, 1.0, 60.0, 0.0}; }
}  // namespace

TEST_CASE("forward transform of the inverse root") {
    ExactFunction f{[](double r) { return 1.0 / std::sqrt(r * r + 1.0); }, 1.0, 1.0, 0.0};
    CHECK(hankel_forward_at(f, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));

    RadialField sampled = RadialField::sample(kRadii, [](double r) { return 1.0 / std::sqrt(r * r + 1.0); },
                                              {0.0, 0.0, 1.0});
    SpectralField spec = hankel_forward(sampled, kFreq, -1.0);
    CHECK(spec(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
}

TEST_CASE("Gaussian is self-reciprocal") {
    // independent oracle: direct quadrature of r e^{-r^2/2} J0(rho r) on [0, 12]
    for (double rho : {0.1, 0.5, 1.0, 2.0, 3.5, 5.0}) {
        double direct = oracle::integrate([&](double r) { return r * std::exp(-0.5 * r * r) * std::cyl_bessel_j(0.0, rho * r); },
                                          0.0, 12.0, 96);
        CHECK(direct == doctest::Approx(std::exp(-0.5 * rho * rho)).epsilon(1e-10));
        CHECK(hankel_forward_at(gaussian(), rho) == doctest::Approx(std::exp(-0.5 * rho * rho)).epsilon(1e-6));
    }
}

TEST_CASE("inverse transform of the linear profile Laplacian") {
    SpectralField spec = SpectralField::sample(kFreq, [](double rho) { return std::exp(-rho) / rho; }, -1.0);
    RadialGrid probe(1e-2, 10.0, 31);
    RadialField back = hankel_inverse(spec, probe);
    for (std::size_t i = 0; i < probe.size(); ++i)
        CHECK(back.values()[i] == doctest::Approx(1.0 / std::hypot(probe[i], 1.0)).epsilon(1e-5));
    CHECK(back.origin_value() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("zero fields") {
    RadialField zero = RadialField::sample(kRadii, [](double) { return 0.0; });
    CHECK(hankel_forward(zero, kFreq).is_zero());
    RadialField back = hankel_inverse(SpectralField::zero(kFreq), kRadii);
    CHECK(back.is_zero());
    CHECK(sobolev_seminorm(SpectralField::zero(kFreq), 0.7) == 0.0);
    CHECK(intersection_norm(SpectralField::zero(kFreq), {{0.2, 0.9}}) == 0.0);
}

TEST_CASE("Gaussian round trip") {
    // worst relative error where f >= 1e-3, on a grid of n nodes
    auto worst = [](std::size_t n) {
        RadialGrid grid(1e-3, 1e3, n);
        RadialField f = RadialField::sample(grid, [](double r) { return std::exp(-0.5 * r * r); });
        RadialField back = hankel_inverse(hankel_forward(f, grid), grid);
        double w = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (f.values()[i] >= 1e-3) w = std::max(w, std::abs(back.values()[i] / f.values()[i] - 1.0));
        return w;
    };
    const double coarse = worst(241), fine = worst(481);
    CHECK(fine < 1e-5);
    // sampling error is fourth order in the node spacing
    CHECK(coarse / fine > 12.0);
}

TEST_CASE("divergent low-frequency model") {
    SpectralField spec = SpectralField::sample(kFreq, [](double rho) { return std::pow(rho, -2.5); }, -2.5);
    CHECK_THROWS_AS(hankel_inverse(spec, kRadii), DomainError);
}

TEST_CASE("homogeneous Sobolev norms against the Gamma integral") {
    SpectralField spec = SpectralField::sample(kFreq, [](double rho) { return std::exp(-rho) / rho; }, -1.0);
    // 2 pi int rho^{2t-1} e^{-2 rho} = 2 pi Gamma(2t) / 2^{2t}
    auto oracle_sq = [](double t) { return 2.0 * M_PI * std::tgamma(2 * t) / std::pow(2.0, 2 * t); };
    CHECK(sobolev_seminorm(spec, 1.0) == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-7));
    CHECK(sobolev_seminorm(spec, 1.0) == doctest::Approx(1.2533141).epsilon(1e-7));
    CHECK(intersection_norm(spec, {{1.0}}) == doctest::Approx(sobolev_seminorm(spec, 1.0)).epsilon(1e-14));
    CHECK(intersection_norm(spec, {{0.5, 1.0}}) ==
          doctest::Approx(std::sqrt(oracle_sq(0.5)) + std::sqrt(oracle_sq(1.0))).epsilon(1e-6));
    CHECK(intersection_norm(spec, {{0.5, 1.0}}) == doctest::Approx(3.02576799).epsilon(1e-6));
}

TEST_CASE("divergent norms name the offending end") {
    SpectralField spec = SpectralField::sample(kFreq, [](double rho) { return std::exp(-rho) / rho; }, -1.0);
    try {
        sobolev_seminorm(spec, 0.0);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.end() == "low-frequency");
    }
    SpectralField flat = SpectralField::sample(kFreq, [](double rho) { return 1.0 / (1.0 + rho); }, 0.0);
    try {
        sobolev_seminorm(flat, 0.5);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.end() == "high-frequency");
    }
}

TEST_CASE("property: forward transform is linear") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
        double a = coeff(gen), b = coeff(gen);
        ExactFunction f{[](double r) { return std::exp(-r * r); }, 1.0, 60.0, 0.0};
        ExactFunction g{[](double r) { return std::pow(1.0 + r * r, -1.5); }, 1.0, 3.0, 0.0};
        ExactFunction h{[&](double r) { return a * f.f(r) + b * g.f(r); }, 1.0, 3.0, 0.0};
        for (double rho : {0.3, 1.7, 4.0}) {
            double lhs = hankel_forward_at(h, rho), rhs = a * hankel_forward_at(f, rho) + b * hankel_forward_at(g, rho);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8).scale(1e-10));
        }
    }
}

TEST_CASE("property: Laplacian spectrum from the gradient multiplies by -rho^2") {
    RadialField grad = RadialField::sample(kRadii, [](double r) { return -r * std::exp(-0.5 * r * r); }, {},
                                           Parity::odd);
    SpectralField lap = laplacian_spectrum_from_gradient(grad, kFreq);
    for (double rho : {0.2, 1.0, 2.5})
        CHECK(lap(rho) == doctest::Approx(-rho * rho * std::exp(-0.5 * rho * rho)).epsilon(1e-5));
}
