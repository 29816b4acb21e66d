#pragma once

#include <vector>

namespace muskat {

// Resolution of the singular alpha-integrals over R^2.
struct QuadratureSpec {
    double a_min = 1e-4;       // inner cutoff; the removed core is added back to leading order
    double a_max = 1e8;        // outer cutoff is a_max * (1 + |y|)
    int n_theta = 64;          // full-turn angular nodes away from the near-diagonal band
    int n_radial = 96;         // log-spaced radial panels across [a_min, a_max]
    int refine_levels = 10;    // geometric refinement toward alpha = y
    bool symmetrize = true;    // pair alpha with -alpha and remove the far-field constant
    double rtol = 1e-7;        // accepted refinement discrepancy (relative)
    double atol = 1e-15;       // accepted refinement discrepancy (absolute)
    int check_stride = 8;      // grid maps verify every check_stride-th node
    bool check_accuracy = true;

    void validate() const;
    QuadratureSpec refined() const;
};

// Nodes of the reduced polar rule for y = (r, 0): log a in [log a_min, log a_max(1+r)],
// theta in [0, pi/2] (paired) or [0, pi] (unpaired), with tensor weights.
struct PolarRule {
    struct Angle {
        double c, s, w;
    };
    struct Ring {
        double a, w;          // node in log a and its weight
        int angles;           // index into angle_sets
    };
    std::vector<Ring> rings;
    std::vector<std::vector<Angle>> angle_sets;
    std::vector<Angle> core_angles;
    double a_lo = 0.0;
    double a_hi = 0.0;
};

// split = 1 for the base rule, 2 to halve every panel (refinement estimate).
PolarRule make_polar_rule(double r, const QuadratureSpec& q, int split, bool paired);

}  // namespace muskat
