#pragma once

#include <cmath>
#include <memory>
#include <optional>

#include "muskat/polar_quadrature.hpp"
#include "muskat/profile.hpp"
#include "muskat/radial.hpp"

namespace muskat {

// Radial function given as an optional closed-form linear profile plus an
// optional sampled part. The zero function is the default.
class ProfileArgument {
public:
    ProfileArgument() = default;
    ProfileArgument(const LinearProfile& p);  // NOLINT(google-explicit-constructor)
    explicit ProfileArgument(RadialField sampled);
    ProfileArgument(RadialField sampled, RadialField sampled_gradient);
    ProfileArgument(const LinearProfile& p, RadialField sampled);
    ProfileArgument(const LinearProfile& p, RadialField sampled, RadialField sampled_gradient);

    void eval(double r, double& value, double& gradient) const {
        value = 0.0;
        gradient = 0.0;
        if (s_ != 0.0) {
            double q = std::hypot(r, 1.0);
            value = s_ * (q - std::log1p(q));
            gradient = s_ * r / (q + 1.0);
        }
        if (field_) {
            value += (*field_)(r);
            gradient += (*grad_)(r);
        }
    }
    double value(double r) const;
    double gradient(double r) const;
    double slope_at_infinity() const;
    bool is_zero() const;
    double linear_slope() const { return s_; }
    const RadialField* sampled() const { return field_.get(); }
    const RadialField* sampled_gradient() const { return grad_.get(); }

    ProfileArgument scaled(double c) const;
    friend ProfileArgument operator+(const ProfileArgument& a, const ProfileArgument& b);

private:
    double s_ = 0.0;
    std::shared_ptr<const RadialField> field_;
    std::shared_ptr<const RadialField> grad_;
};

// (f(|y|) - f(|y - alpha|)) / |alpha| with y on the first axis.
double finite_slope(const ProfileArgument& f, double y, double alpha_x, double alpha_y);

struct OperatorValue {
    double value = 0.0;
    double error_estimate = 0.0;  // |base - refined|
};

// T[f1, f2](y) = (1/2pi) int alpha.grad Delta f1 ((1 + (Delta f2)^2)^{-3/2} - 1) dalpha/|alpha|^2
OperatorValue evaluate_T(const ProfileArgument& f1, const ProfileArgument& f2, double y, const QuadratureSpec& q);
// Q[f1..f4] = int alpha.grad Delta f1 Delta f2 Delta f3 (1 + (Delta f4)^2)^{-5/2} dalpha/|alpha|^2
OperatorValue evaluate_Q(const ProfileArgument& f1, const ProfileArgument& f2, const ProfileArgument& f3,
                         const ProfileArgument& f4, double y, const QuadratureSpec& q);
// R[f1..f4] = int alpha.grad Delta f1 Delta f2 Delta f3 (Delta f4)^2 (1 + (Delta f4)^2)^{-7/2} dalpha/|alpha|^2
OperatorValue evaluate_R(const ProfileArgument& f1, const ProfileArgument& f2, const ProfileArgument& f3,
                         const ProfileArgument& f4, double y, const QuadratureSpec& q);

// Linearisation of T around the linear profile: T[g, k] - (3/2pi) Q[k, g, k, k].
OperatorValue evaluate_T1(const ProfileArgument& g, const LinearProfile& p, double y, const QuadratureSpec& q);
// T[k + g] - T[k] - T1[g].
OperatorValue evaluate_T_ge2(const ProfileArgument& g, const LinearProfile& p, double y, const QuadratureSpec& q);

struct GridEvaluation {
    RadialField field;
    std::vector<double> error_estimates;  // NaN where no refinement check ran
    double max_error = 0.0;
};

// T[f1, f2] at every grid node (parallel); accuracy verified on a node stride.
GridEvaluation evaluate_T_grid(const ProfileArgument& f1, const ProfileArgument& f2, const RadialGrid& grid,
                               const QuadratureSpec& q);

}  // namespace muskat
