#include "muskat/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "muskat/bessel_integral.hpp"
#include "muskat/errors.hpp"
#include "muskat/parallel.hpp"
#include "muskat/quadrature.hpp"

namespace muskat {

HighFrequencyTail HighFrequencyTail::fit(const RadialGrid& grid, const std::vector<double>& v) {
    HighFrequencyTail t;
    const std::size_t n = v.size();
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    // below this fraction of the peak the samples are quadrature noise, not a resolved decay
    if (n < 2 || v[n - 1] == 0.0 || std::abs(v[n - 1]) <= 1e-7 * peak) return t;
    double a = v[n - 2], b = v[n - 1];
    if (n >= 3 && v[n - 3] * a > 0.0 && a * b > 0.0) {
        // log|f| = c + p log(rho) - rate rho through the last three nodes
        const double x0 = std::log(grid[n - 3]), x1 = std::log(grid[n - 2]), x2 = std::log(grid[n - 1]);
        const double dy1 = std::log(a / v[n - 3]), dy2 = std::log(b / a);
        const double dr1 = grid[n - 2] - grid[n - 3], dr2 = grid[n - 1] - grid[n - 2];
        const double det = -(x1 - x0) * dr2 + (x2 - x1) * dr1;
        const double p = (-dy1 * dr2 + dy2 * dr1) / det;
        const double rate = ((x1 - x0) * dy2 - (x2 - x1) * dy1) / det;
        if (rate * grid[n - 1] > 1.0) {
            t.kind = Kind::exponential;
            t.rate = rate;
            t.power = p;
            return t;
        }
        t.kind = Kind::algebraic;
        t.power = std::log(b / a) / std::log(grid[n - 1] / grid[n - 2]);
        return t;
    }
    if (a * b > 0.0 && std::abs(b) < std::abs(a)) {
        t.kind = Kind::exponential;
        t.rate = std::log(a / b) / (grid[n - 1] - grid[n - 2]);
        return t;
    }
    if (a * b > 0.0) {
        t.kind = Kind::algebraic;
        t.power = std::log(b / a) / std::log(grid[n - 1] / grid[n - 2]);
        return t;
    }
    return t;
}

SpectralField::SpectralField(RadialGrid grid, std::vector<double> values, double low_exponent,
                             std::optional<HighFrequencyTail> tail, bool distributional)
    : grid_(std::move(grid)), values_(std::move(values)), low_exponent_(low_exponent), distributional_(distributional) {
    if (values_.size() != grid_.size()) throw ParameterError("spectral field: value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw ParameterError("spectral field: non-finite coefficient");
    if (!std::isfinite(low_exponent_)) throw ParameterError("spectral field: invalid low-frequency exponent");
    tail_ = tail ? *tail : HighFrequencyTail::fit(grid_, values_);
    curve_ = LogCurve(grid_, values_);
}

SpectralField SpectralField::sample(const RadialGrid& grid, const std::function<double(double)>& f,
                                    double low_exponent) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid[i]);
    return SpectralField(grid, std::move(v), low_exponent);
}

SpectralField SpectralField::zero(const RadialGrid& grid) {
    return SpectralField(grid, std::vector<double>(grid.size(), 0.0), 0.0, HighFrequencyTail{});
}

double SpectralField::operator()(double rho) const {
    if (rho < grid_.lo()) {
        if (values_.front() == 0.0) return 0.0;
        return values_.front() * std::pow(rho / grid_.lo(), low_exponent_);
    }
    if (rho > grid_.hi()) {
        const double vn = values_.back();
        switch (tail_.kind) {
            case HighFrequencyTail::Kind::zero:
                return 0.0;
            case HighFrequencyTail::Kind::exponential:
                return vn * std::pow(rho / grid_.hi(), tail_.power) * std::exp(-tail_.rate * (rho - grid_.hi()));
            case HighFrequencyTail::Kind::algebraic:
                return vn * std::pow(rho / grid_.hi(), tail_.power);
        }
    }
    return curve_.value(rho);
}

bool SpectralField::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

SpectralField SpectralField::scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    HighFrequencyTail t = c == 0.0 ? HighFrequencyTail{} : tail_;
    return SpectralField(grid_, std::move(v), low_exponent_, t, distributional_);
}

SpectralField SpectralField::times_power(double a) const {
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::pow(grid_[i], a);
    HighFrequencyTail t = tail_;
    if (t.kind != HighFrequencyTail::Kind::zero) t.power += a;
    return SpectralField(grid_, std::move(v), low_exponent_ + a, t, distributional_);
}

namespace {

SpectralField combine(const SpectralField& a, const SpectralField& b, double sign) {
    if (!(a.grid() == b.grid())) throw ParameterError("spectral arithmetic: grids differ");
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * b.values()[i];
    double low = a.is_zero() ? b.low_exponent() : b.is_zero() ? a.low_exponent()
                                                                : std::min(a.low_exponent(), b.low_exponent());
    // the slower-decaying tail dominates the sum
    using Kind = HighFrequencyTail::Kind;
    const HighFrequencyTail& ta = a.tail();
    const HighFrequencyTail& tb = b.tail();
    HighFrequencyTail tail;
    if (ta.kind == Kind::zero || b.is_zero())
        tail = tb.kind == Kind::zero || b.is_zero() ? ta : tb;
    else if (tb.kind == Kind::zero)
        tail = ta;
    else if (ta.kind == Kind::algebraic && tb.kind == Kind::algebraic)
        tail = ta.power >= tb.power ? ta : tb;
    else if (ta.kind == Kind::algebraic || tb.kind == Kind::algebraic)
        tail = ta.kind == Kind::algebraic ? ta : tb;
    else
        tail = ta.rate <= tb.rate ? ta : tb;
    return SpectralField(a.grid(), std::move(v), low, tail, a.distributional() || b.distributional());
}

IntegrandModel radial_model(const RadialField& field) {
    IntegrandModel m;
    m.f = [&field](double r) { return field(r); };
    m.breakpoints = field.grid().nodes();
    if (field.parity() == Parity::odd)
        m.origin_power = 1.0;
    else
        m.origin_power = field.origin_value() != 0.0 ? 0.0 : 2.0;
    if (!field.decays()) throw DomainError("hankel transform: field does not decay; transform a decaying derivative");
    if (field.tail_residual() == 0.0) {
        m.far = IntegrandModel::Far::none;
    } else {
        m.far = IntegrandModel::Far::algebraic;
        m.far_power = field.tail().decay_power;
    }
    return m;
}

IntegrandModel spectral_model(const SpectralField& spec) {
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

SpectralField operator-(const SpectralField& a, const SpectralField& b) { return combine(a, b, -1.0); }
SpectralField operator+(const SpectralField& a, const SpectralField& b) { return combine(a, b, 1.0); }

SpectralField hankel_forward(const RadialField& field, const RadialGrid& freq, double low_exponent) {
    if (field.is_zero()) return SpectralField::zero(freq);
    IntegrandModel m = radial_model(field);
    std::vector<double> out(freq.size());
    parallel_for(freq.size(), [&](std::size_t j) { out[j] = bessel_integral(m, BesselKernel::j0, freq[j], 1); });
    return SpectralField(freq, std::move(out), low_exponent);
}

namespace {

IntegrandModel exact_model(const ExactFunction& fn, double rho) {
    IntegrandModel m;
    m.f = fn.f;
    m.origin_power = fn.origin_power;
    m.far = IntegrandModel::Far::algebraic;
    m.far_power = fn.far_power;
    // resolve the unit scale finely, then stretch geometrically to the far field
    const double s = fn.scale;
    double end = 40.0 * s;
    if (rho > 0.0) end = std::max(end, 8.0 * std::numbers::pi / rho);
    double u = 1e-3 * s;
    m.breakpoints.push_back(u);
    while (u < end) {
        double step = std::max(0.25 * s, 0.2 * u);
        if (u < 0.25 * s) step = u;  // geometric near the origin
        u = std::min(end, u + step);
        m.breakpoints.push_back(u);
    }
    return m;
}

}  // namespace

double hankel_forward_at(const ExactFunction& fn, double rho) {
    IntegrandModel m = exact_model(fn, rho);
    return bessel_integral(m, BesselKernel::j0, rho, 1);
}

SpectralField hankel_forward(const ExactFunction& fn, const RadialGrid& freq, double low_exponent) {
    std::vector<double> out(freq.size());
    parallel_for(freq.size(), [&](std::size_t j) { out[j] = hankel_forward_at(fn, freq[j]); });
    return SpectralField(freq, std::move(out), low_exponent);
}

double hankel_inverse_at(const SpectralField& spec, double r) {
    if (spec.is_zero()) return 0.0;
    if (!(spec.low_exponent() > -2.0))
        throw DomainError("hankel_inverse: low-frequency model diverges (exponent <= -2)");
    IntegrandModel m = spectral_model(spec);
    return bessel_integral(m, BesselKernel::j0, r, 1);
}

RadialField hankel_inverse(const SpectralField& spec, const RadialGrid& radii) {
    if (spec.is_zero()) return RadialField(radii, std::vector<double>(radii.size(), 0.0), {}, Parity::even, 0.0);
    if (!(spec.low_exponent() > -2.0))
        throw DomainError("hankel_inverse: low-frequency model diverges (exponent <= -2)");
    IntegrandModel m = spectral_model(spec);
    std::vector<double> out(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) { out[i] = bessel_integral(m, BesselKernel::j0, radii[i], 1); });
    double origin = bessel_integral(m, BesselKernel::j0, 0.0, 1);
    TailModel tail = decaying_tail(radii, out);
    return RadialField(radii, std::move(out), tail, Parity::even, origin);
}

SpectralField laplacian_spectrum_from_gradient(const RadialField& gradient, const RadialGrid& freq) {
    if (gradient.is_zero()) return SpectralField::zero(freq);
    IntegrandModel m = radial_model(gradient);
    std::vector<double> out(freq.size());
    parallel_for(freq.size(),
                 [&](std::size_t j) { out[j] = freq[j] * bessel_integral(m, BesselKernel::j1, freq[j], 1); });
    return SpectralField(freq, std::move(out), 0.0);
}

namespace {

// int_0^{rho_min} rho^{2t+1} f^2 under f = v0 (rho/rho0)^p e^{lambda (rho - rho0)},
// lambda taken from the first two samples (|lambda rho0| <= 1/2)
double low_part(const SpectralField& spec, double t) {
    const auto& v = spec.values();
    const double v0 = v.front();
    if (v0 == 0.0) return 0.0;
    const double p = spec.low_exponent();
    const double e = 2.0 * t + 2.0 + 2.0 * p;
    if (!(e > 0.0))
        throw DivergenceError("Sobolev semi-norm diverges at low frequency (2t + 2 + 2p <= 0)", "low-frequency");
    const RadialGrid& g = spec.grid();
    const double r0 = g.lo();
    double lambda = 0.0;
    if (v.size() > 1 && v0 * v[1] > 0.0) {
        lambda = (std::log(v[1] / v0) - p * std::log(g[1] / r0)) / (g[1] - r0);
        if (std::abs(lambda * r0) > 0.5) lambda = 0.0;
    }
    // rho = r0 u^{1/e}
    const GaussRule& gl = gauss_legendre(16);
    double shape = 0.0;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        double u = 0.5 * (1.0 + gl.nodes[j]);
        shape += 0.5 * gl.weights[j] * std::exp(2.0 * lambda * r0 * (std::pow(u, 1.0 / e) - 1.0));
    }
    return v0 * v0 * std::pow(r0, 2.0 * t + 2.0) / e * shape;
}

double high_part(const SpectralField& spec, double t) {
    const auto& tail = spec.tail();
    const double vn = spec.values().back();
    const double rn = spec.grid().hi();
    switch (tail.kind) {
        case HighFrequencyTail::Kind::zero:
            return 0.0;
        case HighFrequencyTail::Kind::algebraic: {
            double e = 2.0 * t + 2.0 + 2.0 * tail.power;
            if (!(e < 0.0))
                throw DivergenceError("Sobolev semi-norm diverges at high frequency", "high-frequency");
            return vn * vn * std::pow(rn, 2.0 * t + 2.0) / (-e);
        }
        case HighFrequencyTail::Kind::exponential: {
            const GaussRule& g = gauss_legendre(16);
            const double step = 1.0 / tail.rate;
            double sum = 0.0;
            for (int p = 0; p < 30; ++p) {
                double a = rn + p * step, b = a + step;
                for (int j = 0; j < 16; ++j) {
                    double rho = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[j];
                    double f = spec(rho);
                    sum += 0.5 * (b - a) * g.weights[j] * std::pow(rho, 2.0 * t + 1.0) * f * f;
                }
            }
            return sum;
        }
    }
    return 0.0;
}

}  // namespace

double sobolev_seminorm(const SpectralField& spec, double t) {
    if (!std::isfinite(t)) throw ParameterError("sobolev_seminorm: non-finite order");
    if (spec.is_zero()) return 0.0;
    const RadialGrid& g = spec.grid();
    std::vector<double> integrand(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = spec.values()[i];
        integrand[i] = std::pow(g[i], 2.0 * t + 2.0) * v * v;  // measure drho = rho dx
    }
    double interior = g.size() >= 8 ? uniform_grid_integral(integrand, g.log_step()) : 0.0;
    if (g.size() < 8) {
        for (std::size_t i = 0; i + 1 < g.size(); ++i) interior += 0.5 * g.log_step() * (integrand[i] + integrand[i + 1]);
    }
    double total = low_part(spec, t) + interior + high_part(spec, t);
    return std::sqrt(2.0 * std::numbers::pi * total);
}

double intersection_norm(const SpectralField& spec, const SobolevSpec& orders) {
    if (orders.exponents.empty()) throw ParameterError("intersection_norm: no exponents");
    double sum = 0.0;
    for (double t : orders.exponents) sum += sobolev_seminorm(spec, t);
    return sum;
}

double weighted_l2(const SpectralField& spec, double t, double lo, double hi) {
    if (!(hi > lo) || !(lo > 0.0)) throw ParameterError("weighted_l2: invalid range");
    const GaussRule& g = gauss_legendre(8);
    const int panels = std::max(8, static_cast<int>(std::ceil(std::log(hi / lo) / spec.grid().log_step())));
    const double xl = std::log(lo), dx = (std::log(hi) - xl) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        for (int j = 0; j < 8; ++j) {
            double x = xl + dx * (p + 0.5 + 0.5 * g.nodes[j]);
            double rho = std::exp(x);
            double f = spec(rho);
            sum += 0.5 * dx * g.weights[j] * std::pow(rho, 2.0 * t + 2.0) * f * f;
        }
    }
    return std::sqrt(sum);
}

}  // namespace muskat
