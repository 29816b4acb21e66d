#include "muskat/nonlinear.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "muskat/errors.hpp"
#include "muskat/parallel.hpp"

namespace muskat {

ProfileArgument::ProfileArgument(const LinearProfile& p) : s_(p.s) {}

ProfileArgument::ProfileArgument(RadialField sampled) {
    auto g = radial_gradient(sampled);
    field_ = std::make_shared<RadialField>(std::move(sampled));
    grad_ = std::make_shared<RadialField>(std::move(g));
}

ProfileArgument::ProfileArgument(RadialField sampled, RadialField sampled_gradient)
    : field_(std::make_shared<RadialField>(std::move(sampled))),
      grad_(std::make_shared<RadialField>(std::move(sampled_gradient))) {}

ProfileArgument::ProfileArgument(const LinearProfile& p, RadialField sampled) : ProfileArgument(std::move(sampled)) {
    s_ = p.s;
}

ProfileArgument::ProfileArgument(const LinearProfile& p, RadialField sampled, RadialField sampled_gradient)
    : ProfileArgument(std::move(sampled), std::move(sampled_gradient)) {
    s_ = p.s;
}

double ProfileArgument::value(double r) const {
    double v, g;
    eval(r, v, g);
    return v;
}

double ProfileArgument::gradient(double r) const {
    double v, g;
    eval(r, v, g);
    return g;
}

double ProfileArgument::slope_at_infinity() const { return s_ + (field_ ? field_->tail().slope : 0.0); }

bool ProfileArgument::is_zero() const { return s_ == 0.0 && (!field_ || field_->is_zero()); }

ProfileArgument ProfileArgument::scaled(double c) const {
    ProfileArgument out;
    out.s_ = s_ * c;
    if (field_) {
        out.field_ = std::make_shared<RadialField>(field_->scaled(c));
        out.grad_ = std::make_shared<RadialField>(grad_->scaled(c));
    }
    return out;
}

ProfileArgument operator+(const ProfileArgument& a, const ProfileArgument& b) {
    ProfileArgument out;
    out.s_ = a.s_ + b.s_;
    if (a.field_ && b.field_) {
        out.field_ = std::make_shared<RadialField>(*a.field_ + *b.field_);
        out.grad_ = std::make_shared<RadialField>(*a.grad_ + *b.grad_);
    } else if (a.field_) {
        out.field_ = a.field_;
        out.grad_ = a.grad_;
    } else if (b.field_) {
        out.field_ = b.field_;
        out.grad_ = b.grad_;
    }
    return out;
}

double finite_slope(const ProfileArgument& f, double y, double ax, double ay) {
    double a = std::hypot(ax, ay);
    if (!(a > 0.0)) throw ParameterError("finite_slope: alpha must be nonzero");
    return (f.value(y) - f.value(std::hypot(y - ax, ay))) / a;
}

namespace {

// Generic evaluation. Kernel(n, d2, d3, d4) is the integrand for one alpha,
// where n = alpha.grad Delta f1 and d_k = Delta_alpha f_k.
template <class Kernel>
double polar_integral(const ProfileArgument* f[4], int used, double r, const QuadratureSpec& q, int split,
                      Kernel&& kernel, double asymptote) {
    const PolarRule rule = make_polar_rule(r, q, split, q.symmetrize);
    double vr[4] = {0, 0, 0, 0}, gr[4] = {0, 0, 0, 0};
    for (int k = 0; k < used; ++k) f[k]->eval(r, vr[k], gr[k]);

    // identical argument objects are evaluated once
    int alias[4];
    for (int k = 0; k < used; ++k) {
        alias[k] = k;
        for (int j = 0; j < k; ++j)
            if (f[j] == f[k]) {
                alias[k] = j;
                break;
            }
    }

    auto one_side = [&](double a, double c, double s, double sign) {
        double px = r - sign * a * c, py = sign * a * s;
        double R = std::hypot(px, py);
        double v[4], g[4];
        for (int k = 0; k < used; ++k) {
            if (alias[k] != k) {
                v[k] = v[alias[k]];
                g[k] = g[alias[k]];
            } else {
                f[k]->eval(R, v[k], g[k]);
            }
        }
        // alpha.grad Delta f1 for alpha = sign * a (c, s)
        double n = sign * c * gr[0];
        if (R > 0.0) n -= g[0] * (sign * r * c - a) / R;
        double d[4];
        for (int k = 1; k < used; ++k) d[k] = (vr[k] - v[k]) / a;
        return kernel(n, d);
    };

    const bool paired = q.symmetrize;
    auto integrand = [&](double a, double c, double s) {
        if (paired) return one_side(a, c, s, 1.0) + one_side(a, c, s, -1.0);
        return one_side(a, c, s, 1.0);
    };

    const double half_pi = 0.5 * std::numbers::pi;
    double total = 0.0;
    for (const auto& ring : rule.rings) {
        const auto& angles = rule.angle_sets[ring.angles];
        double inner = 0.0;
        for (const auto& ang : angles) inner += ang.w * integrand(ring.a, ang.c, ang.s);
        if (paired && ring.a > 1.0) inner -= asymptote * half_pi;
        total += ring.w * inner;
    }
    if (paired) {
        // the paired integrand is O(a) as a -> 0
        double core = 0.0;
        for (const auto& ang : rule.core_angles) core += ang.w * integrand(rule.a_lo, ang.c, ang.s);
        total += core;
    }
    return total;
}

struct Check {
    bool run;
    long node;
};

void enforce(const OperatorValue& v, double fine, const QuadratureSpec& q, double y, long node) {
    double tol = q.rtol * std::abs(fine) + q.atol;
    if (v.error_estimate > tol) {
        std::ostringstream msg;
        msg << "nonlinear quadrature at |y| = " << y;
        if (node >= 0) msg << " (node " << node << ")";
        msg << ": refinement estimate " << v.error_estimate << " exceeds tolerance " << tol;
        throw AccuracyError(msg.str(), v.error_estimate, tol, node);
    }
}

template <class Kernel>
OperatorValue evaluate(const ProfileArgument* f[4], int used, double y, const QuadratureSpec& q, Kernel&& kernel,
                       double asymptote, double prefactor, Check check) {
    q.validate();
    if (!(y >= 0.0) || !std::isfinite(y)) throw ParameterError("nonlinear operator: y must be finite and >= 0");
    double base = prefactor * polar_integral(f, used, y, q, 1, kernel, asymptote);
    OperatorValue out{base, 0.0};
    if (check.run) {
        double fine = prefactor * polar_integral(f, used, y, q, 2, kernel, asymptote);
        out.error_estimate = std::abs(fine - base);
        enforce(out, fine, q, y, check.node);
    }
    return out;
}

inline double bracket_T(double d) { return std::expm1(-1.5 * std::log1p(d * d)); }

struct TKernel {
    double operator()(double n, const double* d) const { return n * bracket_T(d[1]); }
};
struct QKernel {
    double operator()(double n, const double* d) const {
        return n * d[1] * d[2] * std::pow(1.0 + d[3] * d[3], -2.5);
    }
};
struct RKernel {
    double operator()(double n, const double* d) const {
        double d4 = d[3] * d[3];
        return n * d[1] * d[2] * d4 * std::pow(1.0 + d4, -3.5);
    }
};

}  // namespace

OperatorValue evaluate_T(const ProfileArgument& f1, const ProfileArgument& f2, double y, const QuadratureSpec& q) {
    if (f1.is_zero() || f2.is_zero()) return {};
    const ProfileArgument* f[4] = {&f1, &f2, nullptr, nullptr};
    const double s1 = f1.slope_at_infinity(), s2 = f2.slope_at_infinity();
    const double asym = 2.0 * s1 * bracket_T(s2);
    return evaluate(f, 2, y, q, TKernel{}, asym, 1.0 / std::numbers::pi, {q.check_accuracy, -1});
}

OperatorValue evaluate_Q(const ProfileArgument& f1, const ProfileArgument& f2, const ProfileArgument& f3,
                         const ProfileArgument& f4, double y, const QuadratureSpec& q) {
    if (f1.is_zero() || f2.is_zero() || f3.is_zero()) return {};
    const ProfileArgument* f[4] = {&f1, &f2, &f3, &f4};
    const double s1 = f1.slope_at_infinity(), s2 = f2.slope_at_infinity(), s3 = f3.slope_at_infinity(),
                 s4 = f4.slope_at_infinity();
    const double asym = 2.0 * s1 * s2 * s3 * std::pow(1.0 + s4 * s4, -2.5);
    return evaluate(f, 4, y, q, QKernel{}, asym, 2.0, {q.check_accuracy, -1});
}

OperatorValue evaluate_R(const ProfileArgument& f1, const ProfileArgument& f2, const ProfileArgument& f3,
                         const ProfileArgument& f4, double y, const QuadratureSpec& q) {
    if (f1.is_zero() || f2.is_zero() || f3.is_zero() || f4.is_zero()) return {};
    const ProfileArgument* f[4] = {&f1, &f2, &f3, &f4};
    const double s1 = f1.slope_at_infinity(), s2 = f2.slope_at_infinity(), s3 = f3.slope_at_infinity(),
                 s4 = f4.slope_at_infinity();
    const double asym = 2.0 * s1 * s2 * s3 * s4 * s4 * std::pow(1.0 + s4 * s4, -3.5);
    return evaluate(f, 4, y, q, RKernel{}, asym, 2.0, {q.check_accuracy, -1});
}

OperatorValue evaluate_T1(const ProfileArgument& g, const LinearProfile& p, double y, const QuadratureSpec& q) {
    if (g.is_zero()) return {};
    ProfileArgument k(p);
    OperatorValue t = evaluate_T(g, k, y, q);
    OperatorValue qv = evaluate_Q(k, g, k, k, y, q);
    const double c = 3.0 / (2.0 * std::numbers::pi);
    return {t.value - c * qv.value, t.error_estimate + c * qv.error_estimate};
}

OperatorValue evaluate_T_ge2(const ProfileArgument& g, const LinearProfile& p, double y, const QuadratureSpec& q) {
    if (g.is_zero()) return {};
    ProfileArgument k(p);
    ProfileArgument kg = k + g;
    OperatorValue full = evaluate_T(kg, kg, y, q);
    OperatorValue lin = evaluate_T(k, k, y, q);
    OperatorValue first = evaluate_T1(g, p, y, q);
    OperatorValue out{full.value - lin.value - first.value,
                      full.error_estimate + lin.error_estimate + first.error_estimate};
    return out;
}

namespace {

OperatorValue evaluate_T_checked(const ProfileArgument& f1, const ProfileArgument& f2, double y,
                                 const QuadratureSpec& q, Check check) {
    const ProfileArgument* f[4] = {&f1, &f2, nullptr, nullptr};
    const double asym = 2.0 * f1.slope_at_infinity() * bracket_T(f2.slope_at_infinity());
    return evaluate(f, 2, y, q, TKernel{}, asym, 1.0 / std::numbers::pi, check);
}

}  // namespace

GridEvaluation evaluate_T_grid(const ProfileArgument& f1, const ProfileArgument& f2, const RadialGrid& grid,
                               const QuadratureSpec& q) {
    q.validate();
    const std::size_t n = grid.size();
    GridEvaluation out;
    out.error_estimates.assign(n, std::numeric_limits<double>::quiet_NaN());
    if (f1.is_zero() || f2.is_zero()) {
        out.field = RadialField(grid, std::vector<double>(n, 0.0), {}, Parity::even, 0.0);
        std::fill(out.error_estimates.begin(), out.error_estimates.end(), 0.0);
        return out;
    }
    // node n is the origin
    std::vector<double> values(n + 1);
    parallel_for(n + 1, [&](std::size_t i) {
        const double y = i < n ? grid[i] : 0.0;
        const bool check = q.check_accuracy && i < n && (i % q.check_stride == 0 || i + 1 == n);
        OperatorValue v = evaluate_T_checked(f1, f2, y, q, {check, static_cast<long>(i)});
        values[i] = v.value;
        if (check) out.error_estimates[i] = v.error_estimate;
    });
    const double origin = values[n];
    values.pop_back();
    for (double e : out.error_estimates)
        if (!std::isnan(e)) out.max_error = std::max(out.max_error, e);
    TailModel tail = logarithmic_tail(grid, values);
    out.field = RadialField(grid, std::move(values), tail, Parity::even, origin);
    return out;
}

}  // namespace muskat
