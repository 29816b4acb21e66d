#include "muskat/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "muskat/errors.hpp"

namespace muskat {

namespace {

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 256) throw ParameterError("gauss_legendre: order out of range");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(build_rule(n));
    return *slot;
}

Extrapolation wynn_epsilon(const std::vector<double>& s) {
    const std::size_t n = s.size();
    if (n == 0) return {0.0, 0.0};
    if (n < 3) return {s.back(), n == 2 ? std::abs(s[1] - s[0]) : std::abs(s[0])};
    std::vector<double> prev(n + 1, 0.0);
    std::vector<double> cur(s.begin(), s.end());
    // Deep columns amplify rounding, so keep the even-column estimate whose
    // agreement with its neighbours is best.
    double best = s.back();
    double best_err = std::abs(s[n - 1] - s[n - 2]);
    double previous_column = s.back();
    for (std::size_t col = 1; col < n; ++col) {
        std::vector<double> next(n - col);
        for (std::size_t i = 0; i + col < n; ++i) {
            double d = cur[i + 1] - cur[i];
            if (d == 0.0) return {cur[i + 1], std::min(best_err, std::abs(cur[i + 1] - best))};
            next[i] = prev[i + 1] + 1.0 / d;
        }
        if (col % 2 == 0 && next.size() >= 2) {
            double v = next.back();
            double err = std::abs(v - next[next.size() - 2]) + std::abs(v - previous_column);
            if (std::isfinite(v) && err < best_err) {
                best = v;
                best_err = err;
            }
            previous_column = v;
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {best, best_err};
}

void legendre_values(double t, int n, double* out) {
    if (n <= 0) return;
    out[0] = 1.0;
    if (n == 1) return;
    out[1] = t;
    for (int k = 2; k < n; ++k) out[k] = ((2.0 * k - 1.0) * t * out[k - 1] - (k - 1.0) * out[k - 2]) / k;
}

void bessel_asymptotic_pq(int nu, double x, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    p = 1.0;
    q = 0.0;
    double term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
        double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        double mag = std::abs(term);
        if (mag > last) break;
        last = mag;
        // k odd contributes to Q with sign (-1)^((k-1)/2), k even to P with (-1)^(k/2)
        if (k % 2 == 1)
            q += ((k / 2) % 2 == 0 ? term : -term);
        else
            p += ((k / 2) % 2 == 0 ? term : -term);
        if (mag < 1e-18) break;
    }
}

double uniform_grid_integral(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 8) throw ParameterError("uniform_grid_integral: needs at least 8 samples");
    static constexpr double w[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
    double sum = 0.0;
    for (std::size_t i = 4; i + 4 < n; ++i) sum += f[i];
    for (int j = 0; j < 4; ++j) sum += w[j] * (f[j] + f[n - 1 - j]);
    return sum * h;
}

}  // namespace muskat
