#include "muskat/polar_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "muskat/errors.hpp"
#include "muskat/quadrature.hpp"

namespace muskat {

void QuadratureSpec::validate() const {
    if (!(a_min > 0.0) || !(a_max > a_min) || !std::isfinite(a_max))
        throw ParameterError("quadrature: need 0 < a_min < a_max");
    if (n_theta < 32 || n_theta % 2 != 0) throw ParameterError("quadrature: n_theta must be even and >= 32");
    if (n_radial < 64) throw ParameterError("quadrature: n_radial must be >= 64");
    if (refine_levels < 0 || refine_levels > 40) throw ParameterError("quadrature: refine_levels out of range");
    if (!(rtol > 0.0) || !(atol >= 0.0)) throw ParameterError("quadrature: tolerances must be positive");
    if (check_stride < 1) throw ParameterError("quadrature: check_stride must be >= 1");
}

QuadratureSpec QuadratureSpec::refined() const {
    QuadratureSpec q = *this;
    q.n_theta *= 2;
    q.n_radial *= 2;
    return q;
}

namespace {

constexpr int kOrder = 8;

void add_panels(std::vector<double>& out, const std::vector<double>& breaks, int split) {
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        for (int k = 0; k < split; ++k) {
            out.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * k / split);
        }
    }
    out.push_back(breaks.back());
}

std::vector<PolarRule::Angle> angle_rule(const std::vector<double>& breaks, int split) {
    std::vector<double> b;
    add_panels(b, breaks, split);
    const GaussRule& g = gauss_legendre(kOrder);
    std::vector<PolarRule::Angle> out;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        double c = 0.5 * (b[i] + b[i + 1]), hw = 0.5 * (b[i + 1] - b[i]);
        for (int j = 0; j < kOrder; ++j) {
            double th = c + hw * g.nodes[j];
            out.push_back({std::cos(th), std::sin(th), hw * g.weights[j]});
        }
    }
    return out;
}

std::vector<double> uniform_breaks(double lo, double hi, int panels) {
    std::vector<double> b(panels + 1);
    for (int i = 0; i <= panels; ++i) b[i] = lo + (hi - lo) * i / panels;
    return b;
}

}  // namespace

PolarRule make_polar_rule(double r, const QuadratureSpec& q, int split, bool paired) {
    const double half_pi = 0.5 * std::numbers::pi;
    const double a_hi = q.a_max * (1.0 + r);
    PolarRule rule;
    rule.a_lo = q.a_min;
    rule.a_hi = a_hi;

    // radial breakpoints in log a
    std::vector<double> la;
    const double l0 = std::log(q.a_min), l1 = std::log(a_hi);
    for (int i = 0; i <= q.n_radial; ++i) la.push_back(l0 + (l1 - l0) * i / q.n_radial);
    la.push_back(0.0);  // a = 1, where the far-field subtraction switches on
    const bool local = r > 2.0 * q.a_min;
    const double band_lo = 0.5 * r, band_hi = 2.0 * r;
    if (local) {
        double w = 0.5 * r;
        double dmin = std::min(0.5 * r, 1.0) * std::ldexp(1.0, -q.refine_levels);
        la.push_back(std::log(r));
        for (double d = w; d >= dmin * 0.999; d *= 0.5) {
            la.push_back(std::log(r + d));
            if (r - d > q.a_min) la.push_back(std::log(r - d));
        }
    }
    std::sort(la.begin(), la.end());
    std::vector<double> breaks;
    for (double x : la) {
        if (x < l0 || x > l1) continue;
        if (breaks.empty() || x - breaks.back() > 1e-12) breaks.push_back(x);
    }
    std::vector<double> panels;
    add_panels(panels, breaks, split);

    // angular rules
    const int quarter_panels = std::max(1, q.n_theta / (4 * kOrder));
    std::vector<double> far_breaks = uniform_breaks(0.0, half_pi, quarter_panels);
    std::vector<double> near_breaks{0.0};
    {
        double top = std::min(0.5, 1.0 / (1.0 + r));
        double t = top * std::ldexp(1.0, -q.refine_levels);
        while (t < top * 1.0001) {
            near_breaks.push_back(t);
            t *= 2.0;
        }
        int rest = std::max(1, static_cast<int>(std::ceil((half_pi - top) / (half_pi / quarter_panels))));
        for (int i = 1; i <= rest; ++i) near_breaks.push_back(top + (half_pi - top) * i / rest);
    }
    auto far = angle_rule(far_breaks, split);
    auto near = angle_rule(near_breaks, split);
    if (!paired) {
        // unpaired: cover [0, pi]; the far half has no near-diagonal structure
        auto mirror = angle_rule(far_breaks, split);
        for (auto& a : mirror) a.c = -a.c;
        far.insert(far.end(), mirror.begin(), mirror.end());
        near.insert(near.end(), mirror.begin(), mirror.end());
    }
    rule.angle_sets = {far, near};
    rule.core_angles = far;

    const GaussRule& g = gauss_legendre(kOrder);
    for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
        double c = 0.5 * (panels[i] + panels[i + 1]), hw = 0.5 * (panels[i + 1] - panels[i]);
        double a_left = std::exp(panels[i]), a_right = std::exp(panels[i + 1]);
        int set = (local && a_right > band_lo && a_left < band_hi) ? 1 : 0;
        for (int j = 0; j < kOrder; ++j) rule.rings.push_back({std::exp(c + hw * g.nodes[j]), hw * g.weights[j], set});
    }
    return rule;
}

}  // namespace muskat
