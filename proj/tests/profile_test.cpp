#include <doctest.h>

#include <cmath>

#include "muskat/errors.hpp"
#include "muskat/hankel.hpp"
#include "muskat/profile.hpp"

using namespace muskat;

TEST_CASE("linear profile values") {
    CHECK(klin_value(LinearProfile(1.0), 0.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-15));
    CHECK(klin_value(LinearProfile(2.0), std::sqrt(3.0)) == doctest::Approx(2.0 * (2.0 - std::log(3.0))).epsilon(1e-15));
    const double q = std::sqrt(1e6 + 1.0);
    CHECK(klin_value(LinearProfile(1.0), 1e3) == doctest::Approx(q - std::log(q + 1.0)).epsilon(1e-15));
}

TEST_CASE("linear profile gradient") {
    LinearProfile k(1.0);
    CHECK(klin_gradient(k, 0.0) == 0.0);
    CHECK(klin_gradient(k, 1.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
    CHECK(klin_gradient(k, 1e3) > 0.998);
    CHECK(klin_gradient(k, 1e3) < 1.0);
}

TEST_CASE("linear profile Hessian") {
    LinearProfile k(1.0);
    HessianEntries h0 = klin_hessian(k, 0.0);
    CHECK(h0.radial == doctest::Approx(0.5));
    CHECK(h0.transverse == doctest::Approx(0.5));
    HessianEntries h1 = klin_hessian(k, 1.0);
    const double s2 = std::sqrt(2.0);
    CHECK(h1.transverse == doctest::Approx(1.0 / (s2 + 1.0)).epsilon(1e-14));
    CHECK(h1.radial == doctest::Approx(1.0 / (s2 + 1.0) - 1.0 / (s2 * (s2 + 1.0) * (s2 + 1.0))).epsilon(1e-14));
    for (double r : {0.0, 0.3, 1.0, 7.0, 300.0}) {
        HessianEntries h = klin_hessian(LinearProfile(0.7), r);
        CHECK(h.radial + h.transverse == doctest::Approx(klin_laplacian(LinearProfile(0.7), r)).epsilon(1e-14));
    }
}

TEST_CASE("linear profile Laplacian") {
    CHECK(klin_laplacian(LinearProfile(1.0), 0.0) == doctest::Approx(1.0));
    CHECK(klin_laplacian(LinearProfile(2.0), std::sqrt(3.0)) == doctest::Approx(1.0).epsilon(1e-15));
    // five-point stencil of the closed form value
    LinearProfile k(1.3);
    for (double r : {0.5, 1.0, 2.0, 5.0}) {
        const double h = 1e-3;
        double d2 = (klin_value(k, r + h) - 2 * klin_value(k, r) + klin_value(k, r - h)) / (h * h);
        double d1 = (klin_value(k, r + h) - klin_value(k, r - h)) / (2 * h);
        CHECK(std::abs(d2 + d1 / r - klin_laplacian(k, r)) < 1e-6);
    }
}

TEST_CASE("linear profile spectra") {
    RadialGrid freq(1e-3, 1e3, 241);
    SpectralField lap = klin_laplacian_spectrum(LinearProfile(1.0), freq);
    CHECK(lap(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));

    // |k|_{H^t}^2 = 2 pi Gamma(2t - 4) / 2^{2t - 4} for s = 1
    SpectralField prof = klin_profile_spectrum(LinearProfile(1.0), freq);
    const double expected = std::sqrt(2.0 * M_PI * std::tgamma(0.5) / std::sqrt(2.0));
    CHECK(expected == doctest::Approx(2.80620829).epsilon(1e-8));
    CHECK(sobolev_seminorm(prof, 2.25) == doctest::Approx(expected).epsilon(1e-5));
    CHECK_THROWS_AS(sobolev_seminorm(prof, 2.0), DivergenceError);
}
