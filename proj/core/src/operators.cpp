#include "muskat/operators.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "muskat/bessel_integral.hpp"
#include "muskat/errors.hpp"
#include "muskat/parallel.hpp"
#include "muskat/quadrature.hpp"

namespace muskat {

namespace {

// Double-exponential rule on [a, b]; tolerates integrable endpoint singularities.
template <class F>
double tanh_sinh(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    const double half_pi = 0.5 * std::numbers::pi;
    double previous = 0.0;
    for (int level = 3; level <= 10; ++level) {
        const double h = std::ldexp(1.0, -level);
        double sum = 0.0;
        for (double t = -4.0; t <= 4.0 + 1e-12; t += h) {
            double u = half_pi * std::sinh(t);
            double ch = std::cosh(u);
            double x = std::tanh(u);
            double w = half_pi * std::cosh(t) / (ch * ch);
            // distance to the nearer endpoint, computed without cancellation
            double gap = 1.0 / (std::exp(std::abs(u)) * ch);
            double pt = x < 0 ? a + hw * gap : b - hw * gap;
            if (gap <= 0.0 || pt <= a || pt >= b) continue;
            sum += w * f(pt);
        }
        sum *= h * hw;
        if (level > 3 && std::abs(sum - previous) <= 1e-13 * std::abs(sum)) return sum;
        previous = sum;
    }
    return previous;
}

// int_1^inf cos(u) u^{-1-sigma} du by half-period panels and Wynn acceleration
double cosine_tail(double sigma) {
    const GaussRule& g = gauss_legendre(20);
    auto panel = [&](double a, double b) {
        double c = 0.5 * (a + b), hw = 0.5 * (b - a), s = 0.0;
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            double u = c + hw * g.nodes[j];
            s += g.weights[j] * std::cos(u) * std::pow(u, -1.0 - sigma);
        }
        return s * hw;
    };
    double total = panel(1.0, 0.5 * std::numbers::pi);
    std::vector<double> sums;
    double a = 0.5 * std::numbers::pi;
    for (int i = 0; i < 60; ++i) {
        total += panel(a, a + std::numbers::pi);
        a += std::numbers::pi;
        sums.push_back(total);
    }
    return wynn_epsilon(sums).value;
}

double compute_constant(double sigma) {
    // angular factor int_0^{2 pi} |cos t|^sigma dt
    double angular = 4.0 * tanh_sinh([&](double t) { return std::pow(std::sin(t), sigma); }, 0.0, 0.5 * std::numbers::pi);
    // radial factor int_0^inf (1 - cos u) u^{-1-sigma} du
    double inner = tanh_sinh(
        [&](double u) {
            double h = std::sin(0.5 * u);
            return 2.0 * h * h * std::pow(u, -1.0 - sigma);
        },
        0.0, 1.0);
    double radial = inner + 1.0 / sigma - cosine_tail(sigma);
    return 1.0 / (angular * radial);
}

}  // namespace

FracLaplacianConstant frac_laplacian_constant(double sigma) {
    if (!(sigma > 0.0 && sigma < 2.0)) throw ParameterError("fractional Laplacian constant: sigma must lie in (0, 2)");
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(sigma);
        if (it != cache.end()) return {sigma, it->second};
    }
    double c = compute_constant(sigma);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(sigma, c);
    return {sigma, c};
}

SpectralField frac_laplacian_spectral(const SpectralField& spec, double sigma) {
    if (!(sigma >= 0.0 && sigma <= 2.0)) throw ParameterError("frac_laplacian_spectral: sigma must lie in [0, 2]");
    if (sigma == 0.0) return spec;
    return spec.times_power(sigma);
}

RadialFunction as_function(const RadialField& field) {
    if (field.tail().slope != 0.0) throw DomainError("principal value: field grows linearly");
    double far = field.tail().offset;
    if (field.tail().decay_power == 0.0) far += field.tail_residual();
    auto shared = std::make_shared<RadialField>(field);
    return {[shared](double r) { return (*shared)(r); }, far};
}

QuadratureSpec pv_quadrature() {
    QuadratureSpec q;
    q.a_max = 1e6;
    q.n_radial = 72;
    q.rtol = 1e-6;
    q.atol = 1e-12;
    return q;
}

namespace {

// 2 int_0^{pi/2} dtheta int dlog a  D(a, theta) a^{-sigma}, D the paired second difference,
// with the removed core (D ~ a^2) and the far field (D -> 2 (f(r) - far)) added analytically.
template <class Pair>
double pv_polar(Pair&& pair, double far_limit, double sigma, double r, const QuadratureSpec& q, int split) {
    const PolarRule rule = make_polar_rule(r, q, split, true);
    double total = 0.0;
    for (const auto& ring : rule.rings) {
        double inner = 0.0;
        for (const auto& ang : rule.angle_sets[ring.angles]) inner += ang.w * pair(ring.a, ang.c, ang.s);
        total += ring.w * inner * std::pow(ring.a, -sigma);
    }
    double core = 0.0;
    for (const auto& ang : rule.core_angles) core += ang.w * pair(rule.a_lo, ang.c, ang.s);
    total += core * std::pow(rule.a_lo, -sigma) / (2.0 - sigma);
    total += 0.5 * std::numbers::pi * far_limit * std::pow(rule.a_hi, -sigma) / sigma;
    return 2.0 * total;
}

template <class Pair>
OperatorValue pv_checked(Pair&& pair, double far_limit, double sigma, double r, QuadratureSpec q, double scale) {
    q.validate();
    if (!(sigma > 0.0 && sigma <= 1.5)) throw ParameterError("principal value: sigma must lie in (0, 1.5]");
    if (!(r >= 0.0)) throw ParameterError("principal value: r must be >= 0");
    // a narrow feature at distance d from r subtends an angle ~ width / d, so
    // a failed refinement check retries with more angular nodes
    constexpr int kAngularDoublings = 3;
    for (int attempt = 0;; ++attempt) {
        double base = scale * pv_polar(pair, far_limit, sigma, r, q, 1);
        OperatorValue out{base, 0.0};
        if (!q.check_accuracy) return out;
        double fine = scale * pv_polar(pair, far_limit, sigma, r, q, 2);
        out.error_estimate = std::abs(fine - base);
        double tol = q.rtol * std::abs(fine) + q.atol;
        if (out.error_estimate <= tol) return out;
        if (attempt == kAngularDoublings) {
            std::ostringstream msg;
            msg << "principal-value quadrature at r = " << r << ": refinement estimate " << out.error_estimate
                << " exceeds tolerance " << tol;
            throw AccuracyError(msg.str(), out.error_estimate, tol);
        }
        q.n_theta *= 2;
    }
}

}  // namespace

OperatorValue frac_laplacian_pv(const RadialFunction& f, double sigma, double r, const QuadratureSpec& q) {
    const double fr = f.f(r);
    auto pair = [&](double a, double c, double s) {
        double rm = std::hypot(r - a * c, a * s), rp = std::hypot(r + a * c, a * s);
        return 2.0 * fr - f.f(rm) - f.f(rp);
    };
    const double c_sigma = frac_laplacian_constant(sigma).c_sigma;
    return pv_checked(pair, 2.0 * (fr - f.far_value), sigma, r, q, c_sigma);
}

OperatorValue frac_laplacian_pv(const RadialField& field, double sigma, double r, const QuadratureSpec& q) {
    return frac_laplacian_pv(as_function(field), sigma, r, q);
}

OperatorValue frac_product_defect_pv(const RadialFunction& f, const RadialFunction& g, double sigma, double r,
                                     const QuadratureSpec& q) {
    const double fr = f.f(r), gr = g.f(r);
    auto pair = [&](double a, double c, double s) {
        double rm = std::hypot(r - a * c, a * s), rp = std::hypot(r + a * c, a * s);
        return (fr - f.f(rm)) * (gr - g.f(rm)) + (fr - f.f(rp)) * (gr - g.f(rp));
    };
    const double c_sigma = frac_laplacian_constant(sigma).c_sigma;
    const double far = 2.0 * (fr - f.far_value) * (gr - g.far_value);
    return pv_checked(pair, far, sigma, r, q, -c_sigma);
}

RadialField inverse_laplacian_J(const RadialField& phi) {
    const RadialGrid& grid = phi.grid();
    const std::size_t n = grid.size();
    const GaussRule& g = gauss_legendre(8);
    const GaussRule& g16 = gauss_legendre(16);
    auto tau_phi = [&](double x) {
        double r = std::exp(x);
        return r * r * phi(r);  // tau phi dtau = e^{2x} phi dx
    };
    // int_0^r tau phi dtau for r <= r_min, by plain quadrature in r
    auto core_mass = [&](double r) {
        double s = 0.0;
        for (int j = 0; j < 16; ++j) {
            double t = 0.5 * r * (1.0 + g16.nodes[j]);
            s += g16.weights[j] * t * phi(t);
        }
        return 0.5 * r * s;
    };
    std::vector<double> J(n, 0.0);
    double r0 = grid[0];
    {
        double s = 0.0;
        for (int j = 0; j < 16; ++j) {
            double rho = 0.5 * r0 * (1.0 + g16.nodes[j]);
            s += g16.weights[j] * core_mass(rho) / rho;
        }
        J[0] = 0.5 * r0 * s;
    }
    double mass = core_mass(r0);
    const double h = grid.log_step();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double x0 = std::log(grid[i]);
        double outer = 0.0;
        for (int k = 0; k < 8; ++k) {
            double xk = x0 + 0.5 * h * (1.0 + g.nodes[k]);
            double partial = 0.0;
            for (int j = 0; j < 8; ++j) partial += g.weights[j] * tau_phi(x0 + 0.5 * (xk - x0) * (1.0 + g.nodes[j]));
            partial *= 0.5 * (xk - x0);
            outer += g.weights[k] * (mass + partial);
        }
        J[i + 1] = J[i] + 0.5 * h * outer;
        double step = 0.0;
        for (int j = 0; j < 8; ++j) step += g.weights[j] * tau_phi(x0 + 0.5 * h * (1.0 + g.nodes[j]));
        mass += 0.5 * h * step;
    }
    TailModel tail = logarithmic_tail(grid, J);
    return RadialField(grid, std::move(J), tail, Parity::even, 0.0);
}

namespace {

IntegrandModel spectrum_integrand(const SpectralField& spec) {
    IntegrandModel m;
    m.f = [&spec](double rho) { return spec(rho); };
    m.breakpoints = spec.grid().nodes();
    m.origin_power = spec.low_exponent();
    switch (spec.tail().kind) {
        case HighFrequencyTail::Kind::zero:
            m.far = IntegrandModel::Far::none;
            break;
        case HighFrequencyTail::Kind::exponential:
            m.far = IntegrandModel::Far::exponential;
            m.far_rate = spec.tail().rate;
            break;
        case HighFrequencyTail::Kind::algebraic:
            m.far = IntegrandModel::Far::algebraic;
            m.far_power = -spec.tail().power;
            break;
    }
    return m;
}

}  // namespace

RadialField inverse_laplacian_spectral(const SpectralField& phi_hat, const RadialGrid& radii) {
    std::vector<double> out(radii.size(), 0.0);
    if (!phi_hat.is_zero()) {
        IntegrandModel m = spectrum_integrand(phi_hat);
        parallel_for(radii.size(),
                     [&](std::size_t i) { out[i] = bessel_integral(m, BesselKernel::one_minus_j0, radii[i], -1); });
    }
    TailModel tail = logarithmic_tail(radii, out);
    return RadialField(radii, std::move(out), tail, Parity::even, 0.0);
}

RadialField inverse_laplacian_spectral_gradient(const SpectralField& phi_hat, const RadialGrid& radii) {
    std::vector<double> out(radii.size(), 0.0);
    if (!phi_hat.is_zero()) {
        IntegrandModel m = spectrum_integrand(phi_hat);
        parallel_for(radii.size(), [&](std::size_t i) { out[i] = bessel_integral(m, BesselKernel::j1, radii[i], 0); });
    }
    TailModel tail = decaying_tail(radii, out);
    return RadialField(radii, std::move(out), tail, Parity::odd);
}

SpectralField resolvent_L(const SpectralField& f) {
    const RadialGrid& grid = f.grid();
    const std::size_t n = grid.size();
    if (n < 4) throw ParameterError("resolvent_L: needs at least 4 frequencies");
    if (f.is_zero()) return SpectralField::zero(grid);
    const double p = f.low_exponent();
    if (!(p > -3.0)) throw DomainError("resolvent_L: input not integrable against u^2 at the origin");
    const GaussRule& g = gauss_legendre(16);
    const auto& v = f.values();
    std::vector<double> I(n);
    {
        // [0, rho_0] under v0 (u/rho_0)^p e^{lambda (u - rho_0)}, u = rho_0 t^beta
        const double r0 = grid[0], v0 = v[0];
        double lambda = 0.0;
        if (v0 * v[1] > 0.0) lambda = (std::log(v[1] / v0) - p * std::log(grid[1] / r0)) / (grid[1] - r0);
        const double beta = 1.0 / (3.0 + p);
        double s = 0.0;
        for (int j = 0; j < 16; ++j) {
            double t = 0.5 * (1.0 + g.nodes[j]);
            double u = r0 * std::pow(t, beta);
            double jac = r0 * beta * std::pow(t, beta - 1.0);
            s += 0.5 * g.weights[j] * u * u * std::exp(u - r0 + lambda * (u - r0)) * v0 * std::pow(u / r0, p) * jac;
        }
        I[0] = s;
    }
    // Between nodes j and j+1: cubic in log u through log|f| when the four
    // surrounding samples share a sign (exact for powers, accurate for
    // exponential decay on coarse grids), otherwise the field's interpolant.
    auto local_value = [&](std::size_t j) {
        const std::size_t first = std::min(j > 0 ? j - 1 : 0, n - 4);
        bool same_sign = true;
        for (std::size_t i = first; i < first + 4; ++i) same_sign = same_sign && v[i] * v[first] > 0.0;
        return [&, first, same_sign](double u) {
            if (!same_sign) return f(u);
            const double x = std::log(u);
            double acc = 0.0;
            for (std::size_t i = first; i < first + 4; ++i) {
                double w = 1.0;
                for (std::size_t k = first; k < first + 4; ++k)
                    if (k != i) w *= (x - std::log(grid[k])) / (std::log(grid[i]) - std::log(grid[k]));
                acc += w * std::log(std::abs(v[i]));
            }
            return std::copysign(std::exp(acc), v[first]);
        };
    };
    auto piece = [&](const auto& fn, double a, double b, double right) {
        double c = 0.5 * (a + b), hw = 0.5 * (b - a), s = 0.0;
        for (int j = 0; j < 16; ++j) {
            double u = c + hw * g.nodes[j];
            s += g.weights[j] * u * u * std::exp(u - right) * fn(u);
        }
        return s * hw;
    };
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double a = grid[j], b = grid[j + 1];
        const auto fn = local_value(j);
        double step = 0.0;
        if (b - a <= 1.0) {
            step = piece(fn, a, b, b);
        } else {
            // the weight e^{u - b} concentrates at the right end
            double hi = b;
            for (int k = 0; k < 60 && hi > a; ++k) {
                double lo = std::max(a, hi - 1.0);
                step += piece(fn, lo, hi, b);
                hi = lo;
            }
        }
        I[j + 1] = std::exp(a - b) * I[j] + step;
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = I[j] / (grid[j] * grid[j] * grid[j]);
    return SpectralField(grid, std::move(out), p);
}

SpectralField linear_part_residual(const SpectralField& laplacian_k, const SpectralField& laplacian_target) {
    if (!(laplacian_k.grid() == laplacian_target.grid()))
        throw ParameterError("linear_part_residual: grids differ");
    const RadialGrid& grid = laplacian_k.grid();
    const std::size_t n = grid.size();
    if (n < 5) throw ParameterError("linear_part_residual: needs at least 5 frequencies");
    const auto& dk = laplacian_k.values();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double rho = grid[j];
        // e^{-rho_j} * rho e^{rho} Dk^, kept finite by shifting the exponent
        auto scaled = [&](std::size_t i) { return grid[i] * std::exp(grid[i] - rho) * dk[i]; };
        double dx = uniform_derivative_at(scaled, n, j, grid.log_step());
        out[j] = dx / rho - laplacian_target.values()[j];
    }
    return SpectralField(grid, std::move(out), laplacian_target.low_exponent());
}

}  // namespace muskat
