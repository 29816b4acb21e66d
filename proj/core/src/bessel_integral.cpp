#include "muskat/bessel_integral.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "muskat/errors.hpp"
#include "muskat/quadrature.hpp"

namespace muskat {

namespace {

constexpr double kAsymptotic = 40.0;  // switch to the asymptotic amplitude above this argument
constexpr int kFilonPoints = 10;

double kernel_value(BesselKernel kernel, double x) {
    switch (kernel) {
        case BesselKernel::j0:
            return std::cyl_bessel_j(0.0, x);
        case BesselKernel::j1:
            return std::cyl_bessel_j(1.0, x);
        case BesselKernel::one_minus_j0:
            if (x < 1e-3) {
                double q = x * x / 4.0;
                return q * (1.0 - q / 4.0 + q * q / 36.0);
            }
            return 1.0 - std::cyl_bessel_j(0.0, x);
    }
    return 0.0;
}

// j_0 .. j_{n-1} at x; upward recurrence is stable once x exceeds the order
void spherical_bessel(int n, double x, double* out) {
    if (x < 12.0) {
        for (int i = 0; i < n; ++i) out[i] = std::sph_bessel(static_cast<unsigned>(i), x);
        return;
    }
    const double s = std::sin(x), c = std::cos(x);
    out[0] = s / x;
    if (n > 1) out[1] = s / (x * x) - c / x;
    for (int i = 2; i < n; ++i) out[i] = (2.0 * i - 1.0) / x * out[i - 1] - out[i - 2];
}

int kernel_order(BesselKernel kernel) { return kernel == BesselKernel::j1 ? 1 : 0; }

// leading power of K(x) at x -> 0
double kernel_origin_power(BesselKernel kernel) {
    switch (kernel) {
        case BesselKernel::j0:
            return 0.0;
        case BesselKernel::j1:
            return 1.0;
        case BesselKernel::one_minus_j0:
            return 2.0;
    }
    return 0.0;
}

struct FilonTables {
    std::array<std::array<double, kFilonPoints>, kFilonPoints> legendre;  // [node][n]
    FilonTables() {
        const GaussRule& g = gauss_legendre(kFilonPoints);
        for (int j = 0; j < kFilonPoints; ++j) legendre_values(g.nodes[j], kFilonPoints, legendre[j].data());
    }
};

const FilonTables& filon_tables() {
    static const FilonTables t;
    return t;
}

class Engine {
public:
    Engine(const IntegrandModel& m, BesselKernel kernel, double k, int power)
        : model_(m), kernel_(kernel), k_(k), m_(power) {}

    double weighted(double u) const { return model_.f(u) * std::pow(u, m_); }

    double plain_panel(double a, double b, int n) const {
        const GaussRule& g = gauss_legendre(n);
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            double u = c + hw * g.nodes[j];
            s += g.weights[j] * weighted(u) * kernel_value(kernel_, k_ * u);
        }
        return s * hw;
    }

    double smooth_panel(double a, double b, int n) const {
        const GaussRule& g = gauss_legendre(n);
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += g.weights[j] * weighted(c + hw * g.nodes[j]);
        return s * hw;
    }

    // integral of weighted(u) J_nu(k u) on [a, b] with k a >= kAsymptotic.
    // phase_left is k a reduced modulo 2 pi when the caller tracks it exactly.
    double filon_panel(double a, double b, int nu, double phase_left) const {
        const GaussRule& g = gauss_legendre(kFilonPoints);
        const FilonTables& tab = filon_tables();
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        const double kappa = k_ * hw;
        std::array<std::complex<double>, kFilonPoints> coef{};
        for (int j = 0; j < kFilonPoints; ++j) {
            double u = c + hw * g.nodes[j];
            double x = k_ * u;
            double p, q;
            bessel_asymptotic_pq(nu, x, p, q);
            std::complex<double> amp = weighted(u) * std::sqrt(2.0 / (std::numbers::pi * x)) * std::complex<double>(p, q);
            for (int n = 0; n < kFilonPoints; ++n) coef[n] += g.weights[j] * amp * tab.legendre[j][n];
        }
        std::array<double, kFilonPoints> jn;
        spherical_bessel(kFilonPoints, kappa, jn.data());
        std::complex<double> sum = 0.0;
        std::complex<double> in(1.0, 0.0);
        for (int n = 0; n < kFilonPoints; ++n) {
            sum += coef[n] * (n + 0.5) * 2.0 * in * jn[n];
            in *= std::complex<double>(0.0, 1.0);
        }
        const double phase = phase_left + kappa - (2.0 * nu + 1.0) * std::numbers::pi / 4.0;
        return hw * std::real(std::polar(1.0, phase) * sum);
    }

    double filon_panel(double a, double b, int nu) const { return filon_panel(a, b, nu, k_ * a); }

    // Filon pieces of relative length <= 0.15 on [a, b], k a >= kAsymptotic
    double asymptotic_panel(double a, double b) const {
        int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / (0.15 * a))));
        double sum = 0.0;
        for (int i = 0; i < pieces; ++i) {
            double lo = a + (b - a) * i / pieces, hi = a + (b - a) * (i + 1) / pieces;
            double osc = filon_panel(lo, hi, kernel_order(kernel_));
            if (kernel_ == BesselKernel::one_minus_j0)
                sum += smooth_panel(lo, hi, 16) - osc;
            else
                sum += osc;
        }
        return sum;
    }

    double panel(double a, double b) const {
        if (!(b > a)) return 0.0;
        if (k_ == 0.0) return 0.0;
        const double switch_point = kAsymptotic / k_;
        if (a >= switch_point) return asymptotic_panel(a, b);
        if (b > switch_point) return panel(a, switch_point) + asymptotic_panel(switch_point, b);
        int pieces = std::max(1, static_cast<int>(std::ceil(k_ * (b - a) / 4.0)));
        double sum = 0.0;
        for (int i = 0; i < pieces; ++i)
            sum += plain_panel(a + (b - a) * i / pieces, a + (b - a) * (i + 1) / pieces, 16);
        return sum;
    }

    // [0, b] with u = b t^beta removing the power singularity at 0
    double origin_piece(double b) const {
        double q = model_.origin_power + m_ + kernel_origin_power(kernel_);
        if (k_ == 0.0) q = model_.origin_power + m_;
        if (!(q > -1.0)) throw DomainError("bessel integral: integrand not integrable at the origin");
        double split = b;
        if (k_ > 0.0 && k_ * b > 2.0) split = 2.0 / k_;
        const double beta = 1.0 / (q + 1.0);
        const GaussRule& g = gauss_legendre(24);
        double s = 0.0;
        for (int j = 0; j < 24; ++j) {
            double t = 0.5 * (1.0 + g.nodes[j]);
            double u = split * std::pow(t, beta);
            double jac = split * beta * std::pow(t, beta - 1.0);
            double kern = k_ == 0.0 ? 1.0 : kernel_value(kernel_, k_ * u);
            s += 0.5 * g.weights[j] * weighted(u) * kern * jac;
        }
        if (split < b) s += k_ == 0.0 ? smooth_panel(split, b, 16) : panel(split, b);
        return s;
    }

    double exponential_far(double start) const {
        const double rate = model_.far_rate;
        if (!(rate > 0.0)) throw DomainError("bessel integral: exponential far field needs a positive rate");
        const double end = start + 46.0 / rate;
        const double step = std::min(1.0 / rate, std::max(start, 1.0 / rate));
        double s = 0.0;
        for (double a = start; a < end; a += step) {
            double b = std::min(a + step, end);
            s += k_ == 0.0 ? smooth_panel(a, b, 16) : panel(a, b);
        }
        return s;
    }

    double algebraic_far(double start) const {
        const double p = model_.far_power;
        if (k_ == 0.0 || kernel_ == BesselKernel::one_minus_j0) {
            // non-oscillatory part: exact for a pure power tail
            if (!(p > m_ + 1.0)) throw DomainError("bessel integral: far field decays too slowly");
            double smooth = model_.f(start) * std::pow(start, m_ + 1.0) / (p - m_ - 1.0);
            if (k_ == 0.0) return smooth;
            return smooth - oscillatory_far(start, BesselKernel::j0);
        }
        return oscillatory_far(start, kernel_);
    }

    // Tail of f(u) u^m J_nu(k u) beyond start: half-period Filon panels with
    // an exactly tracked phase, summed by iterated weighted averages tuned to
    // the algebraic amplitude u^{m - p - 1/2}.
    double oscillatory_far(double start, BesselKernel kernel) const {
        const double p = model_.far_power;
        const double alpha = p - m_ + 0.5;
        if (!(alpha > 0.0)) throw DomainError("bessel integral: far field decays too slowly");
        Engine sub(model_, kernel, k_, m_);
        const int nu = kernel_order(kernel);
        double total = 0.0;
        double a = start;
        const double switch_point = kAsymptotic / k_;
        if (a < switch_point) {
            total += sub.panel(a, switch_point);
            a = switch_point;
        }
        const double half = std::numbers::pi / k_;
        const double phase0 = std::remainder(k_ * a, 2.0 * std::numbers::pi);
        constexpr int kTerms = 24;
        std::vector<double> sums(kTerms + 1), x(kTerms + 1);
        sums[0] = total;
        x[0] = a;
        for (int i = 0; i < kTerms; ++i) {
            double lo = a + i * half, hi = a + (i + 1) * half;
            double phase = phase0 + (i % 2 == 0 ? 0.0 : std::numbers::pi);
            total += sub.filon_panel(lo, hi, nu, phase);
            sums[i + 1] = total;
            x[i + 1] = hi;
        }
        for (int level = 0; level < kTerms; ++level) {
            const double power = alpha + level;
            for (int n = 0; n + 1 < static_cast<int>(sums.size()); ++n) {
                double eta = std::pow(x[n + 1] / x[n], power);
                sums[n] = (sums[n] + eta * sums[n + 1]) / (1.0 + eta);
            }
            sums.pop_back();
        }
        return sums[0];
    }

    double run() const {
        const auto& bp = model_.breakpoints;
        if (bp.empty()) throw ParameterError("bessel integral: no breakpoints");
        double total = origin_piece(bp.front());
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            total += k_ == 0.0 ? smooth_panel(bp[i], bp[i + 1], 16) : panel(bp[i], bp[i + 1]);
        switch (model_.far) {
            case IntegrandModel::Far::none:
                break;
            case IntegrandModel::Far::exponential:
                total += exponential_far(bp.back());
                break;
            case IntegrandModel::Far::algebraic:
                total += algebraic_far(bp.back());
                break;
        }
        return total;
    }

private:
    const IntegrandModel& model_;
    BesselKernel kernel_;
    double k_;
    int m_;
};

}  // namespace

double bessel_integral(const IntegrandModel& model, BesselKernel kernel, double k, int m) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw ParameterError("bessel integral: invalid frequency");
    if (k == 0.0 && kernel != BesselKernel::j0) return 0.0;
    return Engine(model, kernel, k, m).run();
}

}  // namespace muskat
