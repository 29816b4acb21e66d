#include "muskat/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "muskat/errors.hpp"

namespace muskat {

RadialGrid::RadialGrid(double lo, double hi, std::size_t count) : lo_(lo), hi_(hi) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw ParameterError("grid: need 0 < lo < hi < inf");
    if (count < 2) throw ParameterError("grid: need at least 2 nodes");
    xlo_ = std::log(lo);
    h_ = (std::log(hi) - xlo_) / static_cast<double>(count - 1);
    nodes_.resize(count);
    for (std::size_t i = 0; i < count; ++i) nodes_[i] = std::exp(xlo_ + h_ * static_cast<double>(i));
    nodes_.front() = lo;
    nodes_.back() = hi;
}

void RadialGrid::require_profile_grid() const {
    if (size() < 16) throw ParameterError("grid: profile grids need at least 16 nodes");
    if (!(lo_ < 1.0 && hi_ > 1.0)) throw ParameterError("grid: profile grids must satisfy r_min < 1 < r_max");
}

RadialGrid make_log_grid(double r_min, double r_max, std::size_t count) { return RadialGrid(r_min, r_max, count); }

std::vector<double> uniform_first_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 4) throw ParameterError("differentiation needs at least 4 nodes");
    std::vector<double> d(n);
    auto at = [&](std::size_t j) { return f[j]; };
    for (std::size_t i = 0; i < n; ++i) d[i] = uniform_derivative_at(at, n, i, h);
    return d;
}

std::vector<double> uniform_second_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 6) throw ParameterError("second differences need at least 6 nodes");
    std::vector<double> d(n);
    const double c = 1.0 / (12.0 * h * h);
    // 6-point one-sided stencils keep 4th order at the ends.
    auto edge0 = [&](double f0, double f1, double f2, double f3, double f4, double f5) {
        return (45 * f0 - 154 * f1 + 214 * f2 - 156 * f3 + 61 * f4 - 10 * f5) * c;
    };
    auto edge1 = [&](double f0, double f1, double f2, double f3, double f4, double f5) {
        return (10 * f0 - 15 * f1 - 4 * f2 + 14 * f3 - 6 * f4 + f5) * c;
    };
    d[0] = edge0(f[0], f[1], f[2], f[3], f[4], f[5]);
    d[1] = edge1(f[0], f[1], f[2], f[3], f[4], f[5]);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = c * (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]);
    const std::size_t m = n - 1;
    d[m] = edge0(f[m], f[m - 1], f[m - 2], f[m - 3], f[m - 4], f[m - 5]);
    d[m - 1] = edge1(f[m], f[m - 1], f[m - 2], f[m - 3], f[m - 4], f[m - 5]);
    return d;
}

LogCurve::LogCurve(const RadialGrid& grid, const std::vector<double>& values)
    : xlo_(grid.log_lo()), h_(grid.log_step()), v_(values) {
    const std::size_t n = v_.size();
    if (n != grid.size()) throw ParameterError("curve: value count does not match grid");
    if (n < 4) {
        // Too short for 4th-order slopes: secant slopes.
        d_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t a = i == 0 ? 0 : i - 1;
            std::size_t b = i + 1 < n ? i + 1 : n - 1;
            if (b > a) d_[i] = (v_[b] - v_[a]) / (h_ * static_cast<double>(b - a));
        }
        return;
    }
    d_ = uniform_first_derivative(v_, h_);
    // Monotonicity filter on locally monotone stretches only; extrema keep the high-order slope.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double left = (v_[i] - v_[i - 1]) / h_;
        double right = (v_[i + 1] - v_[i]) / h_;
        if (left * right > 0.0) {
            double cap = 3.0 * std::min(std::abs(left), std::abs(right));
            if (d_[i] * left <= 0.0)
                d_[i] = 0.0;
            else if (std::abs(d_[i]) > cap)
                d_[i] = std::copysign(cap, left);
        } else if (left == 0.0 && right == 0.0) {
            d_[i] = 0.0;
        }
    }
}

void LogCurve::locate(double u, std::size_t& i, double& t) const {
    double s = (std::log(u) - xlo_) / h_;
    const std::size_t last = v_.size() - 2;
    if (!(s > 0.0)) {
        i = 0;
        t = std::max(s, 0.0);
        return;
    }
    double fl = std::floor(s);
    if (fl >= static_cast<double>(last)) {
        i = last;
        t = std::min(s - static_cast<double>(last), 1.0);
        return;
    }
    i = static_cast<std::size_t>(fl);
    t = s - fl;
}

double LogCurve::value(double u) const {
    std::size_t i;
    double t;
    locate(u, i, t);
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v_[i] + (t3 - 2 * t2 + t) * h_ * d_[i] + (-2 * t3 + 3 * t2) * v_[i + 1] +
           (t3 - t2) * h_ * d_[i + 1];
}

double LogCurve::log_slope(double u) const {
    std::size_t i;
    double t;
    locate(u, i, t);
    const double t2 = t * t;
    return (6 * t2 - 6 * t) / h_ * v_[i] + (3 * t2 - 4 * t + 1) * d_[i] + (-6 * t2 + 6 * t) / h_ * v_[i + 1] +
           (3 * t2 - 2 * t) * d_[i + 1];
}

RadialField::RadialField(RadialGrid grid, std::vector<double> values, TailModel tail, Parity parity,
                         std::optional<double> origin_value)
    : grid_(std::move(grid)), values_(std::move(values)), tail_(tail), parity_(parity) {
    if (values_.size() != grid_.size()) throw ParameterError("field: value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw ParameterError("field: non-finite sample");
    if (!std::isfinite(tail_.slope) || !std::isfinite(tail_.offset) || !(tail_.decay_power >= 0.0))
        throw ParameterError("field: invalid tail model");
    if (parity_ == Parity::odd) {
        origin_ = 0.0;
    } else if (origin_value) {
        origin_ = *origin_value;
    } else if (values_.size() >= 2) {
        // even extrapolation f0 + c r^2 through the first two nodes
        double r0 = grid_[0], r1 = grid_[1];
        origin_ = (values_[0] * r1 * r1 - values_[1] * r0 * r0) / (r1 * r1 - r0 * r0);
    } else {
        origin_ = values_[0];
    }
    prepare();
}

RadialField RadialField::sample(const RadialGrid& grid, const std::function<double(double)>& f, TailModel tail,
                                Parity parity) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    std::optional<double> origin;
    if (parity == Parity::even) origin = f(0.0);
    return RadialField(grid, std::move(v), tail, parity, origin);
}

void RadialField::prepare() {
    curve_ = LogCurve(grid_, values_);
    const double r0 = grid_[0];
    const double v0 = values_[0];
    const double d0 = curve_.node_log_slope(0) / r0;  // df/dr at r0
    if (parity_ == Parity::even) {
        // f = origin + a r^2 + b r^4, matching value and slope at r0
        double b4 = d0 * r0 / 2.0 - (v0 - origin_);
        double a2 = (v0 - origin_) - b4;
        blend_a_ = a2 / (r0 * r0);
        blend_b_ = b4 / (r0 * r0 * r0 * r0);
    } else {
        // f = a r + b r^3
        double b3 = (d0 * r0 - v0) / 2.0;
        double a1 = v0 - b3;
        blend_a_ = a1 / r0;
        blend_b_ = b3 / (r0 * r0 * r0);
    }
    const double rn = grid_.hi();
    residual_ = values_.back() - tail_.slope * rn - tail_.offset;
}

double RadialField::operator()(double r) const {
    r = std::abs(r);
    if (r < grid_.lo()) {
        double r2 = r * r;
        if (parity_ == Parity::even) return origin_ + r2 * (blend_a_ + r2 * blend_b_);
        return r * (blend_a_ + r2 * blend_b_);
    }
    if (r > grid_.hi()) {
        double base = tail_.slope * r + tail_.offset;
        if (tail_.log_slope != 0.0) base += tail_.log_slope * std::log(r / grid_.hi());
        if (residual_ == 0.0) return base;
        if (tail_.decay_power == 0.0) return base + residual_;
        return base + residual_ * std::pow(grid_.hi() / r, tail_.decay_power);
    }
    return curve_.value(r);
}

double RadialField::derivative(double r) const {
    r = std::abs(r);
    if (r < grid_.lo()) {
        double r2 = r * r;
        if (parity_ == Parity::even) return r * (2 * blend_a_ + 4 * blend_b_ * r2);
        return blend_a_ + 3 * blend_b_ * r2;
    }
    if (r > grid_.hi()) {
        double d = tail_.slope + tail_.log_slope / r;
        if (residual_ != 0.0 && tail_.decay_power != 0.0)
            d -= tail_.decay_power * residual_ * std::pow(grid_.hi() / r, tail_.decay_power) / r;
        return d;
    }
    return curve_.log_slope(r) / r;
}

bool RadialField::decays() const {
    if (tail_.slope != 0.0 || tail_.offset != 0.0 || tail_.log_slope != 0.0) return false;
    return residual_ == 0.0 || tail_.decay_power > 0.0;
}

bool RadialField::is_zero() const {
    if (origin_ != 0.0 || tail_.slope != 0.0 || tail_.offset != 0.0 || tail_.log_slope != 0.0) return false;
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

RadialField RadialField::scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    TailModel t{tail_.slope * c, tail_.offset * c, tail_.decay_power, tail_.log_slope * c};
    return RadialField(grid_, std::move(v), t, parity_, origin_ * c);
}

RadialField operator+(const RadialField& a, const RadialField& b) {
    if (!(a.grid() == b.grid())) throw ParameterError("field sum: grids differ");
    if (a.parity() != b.parity()) throw ParameterError("field sum: parities differ");
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values()[i];
    TailModel t{a.tail().slope + b.tail().slope, a.tail().offset + b.tail().offset,
                std::min(a.tail().decay_power, b.tail().decay_power), a.tail().log_slope + b.tail().log_slope};
    return RadialField(a.grid(), std::move(v), t, a.parity(), a.origin_value() + b.origin_value());
}

TailModel affine_tail(const RadialGrid& grid, const std::vector<double>& values) {
    const std::size_t n = grid.size();
    if (n < 2) return {};
    double slope = (values[n - 1] - values[n - 2]) / (grid[n - 1] - grid[n - 2]);
    return {slope, values[n - 1] - slope * grid[n - 1], 0.0};
}

TailModel logarithmic_tail(const RadialGrid& grid, const std::vector<double>& values) {
    const std::size_t n = grid.size();
    if (n < 4) return affine_tail(grid, values);
    double c = uniform_derivative_at([&](std::size_t i) { return values[i]; }, n, n - 1, grid.log_step());
    return {0.0, values[n - 1], 0.0, c};
}

TailModel decaying_tail(const RadialGrid& grid, const std::vector<double>& values) {
    const std::size_t n = grid.size();
    if (n < 3) return {0.0, 0.0, 1.0};
    // fit |f| ~ r^{-p} over the last few nodes
    const std::size_t k = std::min<std::size_t>(4, n - 1);
    double a = values[n - 1 - k], b = values[n - 1];
    double p = 1.0;
    if (a != 0.0 && b != 0.0 && a * b > 0.0 && std::abs(b) < std::abs(a))
        p = std::log(std::abs(a / b)) / std::log(grid[n - 1] / grid[n - 1 - k]);
    p = std::clamp(p, 0.05, 50.0);
    return {0.0, 0.0, p};
}

RadialField radial_gradient(const RadialField& field) {
    const RadialGrid& g = field.grid();
    if (g.size() < 4) throw ParameterError("radial_gradient: field needs at least 4 nodes");
    std::vector<double> d = uniform_first_derivative(field.values(), g.log_step());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] /= g[i];
    const TailModel& t = field.tail();
    double power = t.decay_power > 0.0 ? t.decay_power + 1.0 : 0.0;
    if (t.log_slope != 0.0) power = t.decay_power > 0.0 ? std::min(1.0, power) : 1.0;
    TailModel dt{0.0, t.slope, power};
    if (field.parity() == Parity::even) return RadialField(g, std::move(d), dt, Parity::odd);
    double r0 = g[0];
    double origin = d[0] - (d[1] - d[0]) / (g[1] * g[1] - r0 * r0) * r0 * r0;
    return RadialField(g, std::move(d), dt, Parity::even, origin);
}

RadialField radial_laplacian(const RadialField& field) {
    const RadialGrid& g = field.grid();
    std::vector<double> d = uniform_second_derivative(field.values(), g.log_step());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] /= g[i] * g[i];
    double power = field.tail().decay_power > 0.0 ? field.tail().decay_power + 2.0 : 0.0;
    if (field.tail().log_slope != 0.0) power = 2.0;
    TailModel dt{0.0, 0.0, power};
    return RadialField(g, std::move(d), dt, Parity::even);
}

double weighted_linf(const RadialField& field, const WeightedNormSpec& spec) {
    if (!(spec.r_lo > 0.0) || !std::isfinite(spec.weight_exponent) || !(spec.r_hi >= spec.r_lo))
        throw ParameterError("weighted_linf: invalid specification");
    double best = 0.0;
    bool any = false;
    const RadialGrid& g = field.grid();
    const double slack = 1e-12;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g[i];
        if (r < spec.r_lo * (1 - slack) || r > spec.r_hi * (1 + slack)) continue;
        any = true;
        best = std::max(best, std::abs(field.values()[i]) / std::pow(r, spec.weight_exponent));
    }
    if (!any) throw ParameterError("weighted_linf: annulus contains no grid nodes");
    return best;
}

}  // namespace muskat
