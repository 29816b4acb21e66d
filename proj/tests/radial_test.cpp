#include <doctest.h>

#include <cmath>
#include <random>

#include "muskat/errors.hpp"
#include "muskat/profile.hpp"
#include "muskat/radial.hpp"

using namespace muskat;

TEST_CASE("log grid nodes") {
    RadialGrid a = make_log_grid(0.01, 100, 3);
    CHECK(a[0] == 0.01);
    CHECK(a[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a[2] == 100);

    RadialGrid b = make_log_grid(1, 4, 3);
    CHECK(b[1] == doctest::Approx(2.0).epsilon(1e-14));

    RadialGrid c = make_log_grid(1e-3, 1e3, 241);
    REQUIRE(c.size() == 241);
    const double ratio = std::pow(10.0, 6.0 / 240.0);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] / c[i - 1] == doctest::Approx(ratio).epsilon(1e-12));
}

TEST_CASE("log grid rejects invalid bounds") {
    CHECK_THROWS_AS(make_log_grid(0.0, 1.0, 10), ParameterError);
    CHECK_THROWS_AS(make_log_grid(2.0, 1.0, 10), ParameterError);
    CHECK_THROWS_AS(make_log_grid(1.0, 2.0, 1), ParameterError);
    CHECK_THROWS_AS(make_log_grid(1.0, INFINITY, 10), ParameterError);
}

TEST_CASE("field evaluation") {
    RadialGrid grid(1e-3, 1e3, 241);
    SUBCASE("exact at nodes") {
        RadialField f = RadialField::sample(grid, [](double r) { return r; }, {1.0, 0.0});
        for (std::size_t i = 0; i < grid.size(); i += 7) CHECK(f(grid[i]) == doctest::Approx(grid[i]).epsilon(1e-14));
    }
    SUBCASE("inverse root between nodes") {
        RadialField f = RadialField::sample(grid, [](double r) { return 1.0 / std::sqrt(r * r + 1.0); });
        CHECK(std::abs(f(2.5) * std::sqrt(7.25) - 1.0) < 1e-6);
    }
    SUBCASE("constant extends beyond the grid") {
        RadialField f = RadialField::sample(grid, [](double) { return 3.5; }, {0.0, 3.5});
        CHECK(f(1e4) == doctest::Approx(3.5));
        CHECK(f(0.0) == doctest::Approx(3.5));
    }
    SUBCASE("tail is continuous at r_max") {
        RadialField f = RadialField::sample(grid, [](double r) { return std::sqrt(r * r + 1.0); },
                                            affine_tail(grid, klin_field(LinearProfile(1.0), grid).values()));
        CHECK(std::abs(f(grid.hi() * (1 + 1e-9)) - f(grid.hi())) < 1e-6);
    }
}

TEST_CASE("interpolation error decreases at fourth order") {
    auto f = [](double r) { return std::exp(-r) * std::cos(r); };
    auto max_err = [&](std::size_t n) {
        RadialGrid grid(0.1, 10.0, n);
        RadialField field = RadialField::sample(grid, f);
        double e = 0.0;
        for (std::size_t i = 2; i + 3 < n; ++i) {
            double r = std::sqrt(grid[i] * grid[i + 1]);
            e = std::max(e, std::abs(field(r) - f(r)));
        }
        return e;
    };
    double order = std::log2(max_err(81) / max_err(161));
    CHECK(order > 3.5);
}

TEST_CASE("radial gradient") {
    RadialGrid grid(1e-3, 1e3, 241);
    SUBCASE("square") {
        RadialField g = radial_gradient(RadialField::sample(grid, [](double r) { return r * r; }));
        for (std::size_t i = 2; i + 2 < grid.size(); ++i) CHECK(std::abs(g.values()[i] / (2 * grid[i]) - 1.0) < 1e-5);
    }
    SUBCASE("constant") {
        RadialField g = radial_gradient(RadialField::sample(grid, [](double) { return 2.0; }, {0.0, 2.0}));
        for (double v : g.values()) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("linear profile") {
        LinearProfile k(1.0);
        RadialField g = radial_gradient(klin_field(k, grid));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double r = grid[i];
            CHECK(std::abs(g.values()[i] - r / (std::sqrt(r * r + 1) + 1)) < 1e-5);
        }
    }
    SUBCASE("too few nodes") {
        RadialGrid tiny(1.0, 2.0, 3);
        CHECK_THROWS_AS(radial_gradient(RadialField::sample(tiny, [](double r) { return r; })), ParameterError);
    }
}

TEST_CASE("weighted sup norm") {
    RadialGrid grid(1e-3, 1e3, 241);
    const double t1 = 1.75;
    RadialField f = RadialField::sample(grid, [&](double r) { return std::pow(r, t1 - 1.0); });
    CHECK(weighted_linf(f, {1, t1 - 1.0, 1e-3, 1e3}) == doctest::Approx(1.0).epsilon(1e-12));
    RadialField zero = RadialField::sample(grid, [](double) { return 0.0; });
    CHECK(weighted_linf(zero, {1, 0.5, 1e-3, 1e3}) == 0.0);

    RadialGrid g4 = make_log_grid(1.0, 4.0, 3);
    RadialField lin = RadialField::sample(g4, [](double r) { return r; });
    CHECK(weighted_linf(lin, {0, 0.5, 1.0, 4.0}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(weighted_linf(lin, {0, 0.5, 5.0, 6.0}), ParameterError);
}

TEST_CASE("property: sums and scaling act on samples, interpolation follows") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0), rad(-6.0, 6.0);
    RadialGrid grid(1e-3, 1e3, 121);
    for (int trial = 0; trial < 20; ++trial) {
        double a = coeff(gen), b = coeff(gen), c = coeff(gen);
        RadialField f = RadialField::sample(grid, [&](double r) { return a / (1 + r * r); });
        RadialField g = RadialField::sample(grid, [&](double r) { return b * std::exp(-r); });
        RadialField h = f.scaled(c) + g;
        for (std::size_t i = 0; i < grid.size(); i += 5)
            CHECK(h(grid[i]) == doctest::Approx(c * f(grid[i]) + g(grid[i])).epsilon(1e-14).scale(1e-14));
        // the monotone slope filter is not linear, so off-node agreement is to interpolation accuracy
        for (int k = 0; k < 5; ++k) {
            double r = std::exp(rad(gen));
            CHECK(std::abs(h(r) - (c * f(r) + g(r))) < 1e-6 * (std::abs(a * c) + std::abs(b)));
        }
    }
}
