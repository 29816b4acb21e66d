#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace muskat {

// Log-spaced grid of positive abscissae (radii or frequencies).
class RadialGrid {
public:
    RadialGrid() = default;
    RadialGrid(double lo, double hi, std::size_t count);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }
    double log_lo() const { return xlo_; }
    double log_step() const { return h_; }

    // Profile grids must have count >= 16 and straddle r = 1.
    void require_profile_grid() const;

    bool operator==(const RadialGrid& o) const { return lo_ == o.lo_ && hi_ == o.hi_ && size() == o.size(); }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
    double xlo_ = 0.0;
    double h_ = 0.0;
    std::vector<double> nodes_;
};

RadialGrid make_log_grid(double r_min, double r_max, std::size_t count);

// 4th-order first derivative at node i of n uniformly spaced samples f(j)
// (one-sided near the ends); the only differentiation stencil in the library.
template <class Sample>
double uniform_derivative_at(Sample&& f, std::size_t n, std::size_t i, double h) {
    const double c = 1.0 / (12.0 * h);
    if (n == 4) {
        double a = f(0), b = f(1), d = f(2), e = f(3);
        switch (i) {
            case 0: return (-11 * a + 18 * b - 9 * d + 2 * e) / (6 * h);
            case 1: return (-2 * a - 3 * b + 6 * d - e) / (6 * h);
            case 2: return (a - 6 * b + 3 * d + 2 * e) / (6 * h);
            default: return (-2 * a + 9 * b - 18 * d + 11 * e) / (6 * h);
        }
    }
    const std::size_t m = n - 1;
    if (i == 0) return c * (-25 * f(0) + 48 * f(1) - 36 * f(2) + 16 * f(3) - 3 * f(4));
    if (i == 1) return c * (-3 * f(0) - 10 * f(1) + 18 * f(2) - 6 * f(3) + f(4));
    if (i == m) return -c * (-25 * f(m) + 48 * f(m - 1) - 36 * f(m - 2) + 16 * f(m - 3) - 3 * f(m - 4));
    if (i == m - 1) return -c * (-3 * f(m) - 10 * f(m - 1) + 18 * f(m - 2) - 6 * f(m - 3) + f(m - 4));
    return c * (f(i - 2) - 8 * f(i - 1) + 8 * f(i + 1) - f(i + 2));
}

// 4th-order finite differences on a uniform abscissa (one-sided at the ends).
std::vector<double> uniform_first_derivative(const std::vector<double>& f, double h);
std::vector<double> uniform_second_derivative(const std::vector<double>& f, double h);

// Cubic Hermite interpolant in x = log(u) over a RadialGrid.
class LogCurve {
public:
    LogCurve() = default;
    LogCurve(const RadialGrid& grid, const std::vector<double>& values);

    // Valid for u in [grid.lo(), grid.hi()].
    double value(double u) const;
    double log_slope(double u) const;  // d/dlog(u)
    double node_log_slope(std::size_t i) const { return d_[i]; }

private:
    void locate(double u, std::size_t& i, double& t) const;
    double xlo_ = 0.0;
    double h_ = 1.0;
    std::vector<double> v_;
    std::vector<double> d_;
};

enum class Parity { even, odd };

// Far field for r > r_max:
//   f(r) = slope*r + log_slope*log(r/r_max) + offset
//          + (f(r_max) - slope*r_max - offset) * (r_max/r)^decay_power
// decay_power = 0 keeps the residual constant (continuous continuation).
struct TailModel {
    double slope = 0.0;
    double offset = 0.0;
    double decay_power = 0.0;
    double log_slope = 0.0;
};

class RadialField {
public:
    RadialField() = default;
    RadialField(RadialGrid grid, std::vector<double> values, TailModel tail = {},
                Parity parity = Parity::even, std::optional<double> origin_value = std::nullopt);

    static RadialField sample(const RadialGrid& grid, const std::function<double(double)>& f,
                              TailModel tail = {}, Parity parity = Parity::even);

    double operator()(double r) const;
    double derivative(double r) const;

    const RadialGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const TailModel& tail() const { return tail_; }
    Parity parity() const { return parity_; }
    double origin_value() const { return origin_; }
    double tail_residual() const { return residual_; }

    // True when the far field tends to zero.
    bool decays() const;
    bool is_zero() const;

    RadialField scaled(double c) const;

private:
    void prepare();

    RadialGrid grid_;
    std::vector<double> values_;
    TailModel tail_;
    Parity parity_ = Parity::even;
    double origin_ = 0.0;
    LogCurve curve_;
    double blend_a_ = 0.0;
    double blend_b_ = 0.0;
    double residual_ = 0.0;
};

RadialField operator+(const RadialField& a, const RadialField& b);

// Affine tail fitted to the last two nodes.
TailModel affine_tail(const RadialGrid& grid, const std::vector<double>& values);
// f ~ c log r + const, c = r f'(r) at the last node.
TailModel logarithmic_tail(const RadialGrid& grid, const std::vector<double>& values);
// Power-law decaying tail fitted to the last few nodes.
TailModel decaying_tail(const RadialGrid& grid, const std::vector<double>& values);

// f'(r) by 4th-order differences in log r.
RadialField radial_gradient(const RadialField& field);
// f'' + f'/r.
RadialField radial_laplacian(const RadialField& field);

struct WeightedNormSpec {
    int derivative_order = 1;
    double weight_exponent = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
};

// sup over annulus nodes of |f(r)| / r^w.
double weighted_linf(const RadialField& field, const WeightedNormSpec& spec);

}  // namespace muskat
