#include "muskat/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "muskat/operators.hpp"
#include "muskat/parallel.hpp"
#include "muskat/profile.hpp"

namespace muskat {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double sup_relative(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(t1 > 1.5 && t1 < 2.0)) throw ParameterError("solver: t1 must lie in (3/2, 2)");
    if (!(s >= 0.0) || !std::isfinite(s)) throw ParameterError("solver: s must be a finite non-negative slope");
    if (!(tolerance > 0.0)) throw ParameterError("solver: tolerance must be positive");
    if (max_iterations < 1) throw ParameterError("solver: max_iterations must be at least 1");
    if (!(s_guard > 0.0)) throw ParameterError("solver: s_guard must be positive");
    if (!(cross_check_tolerance > 0.0)) throw ParameterError("solver: cross_check_tolerance must be positive");
    const GridConfig& g = grid;
    if (!(g.r_min > 0.0 && g.r_max > g.r_min) || !(g.rho_min > 0.0 && g.rho_max > g.rho_min))
        throw ParameterError("solver: grid bounds must satisfy 0 < min < max");
    if (g.r_count < 16 || g.rho_count < 16) throw ParameterError("solver: grids need at least 16 nodes");
    if (g.r_min > 0.05 || g.r_max < 100.0) throw ParameterError("solver: radial grid must cover [0.05, 100]");
    if (g.rho_min > 0.05 || g.rho_max < 20.0) throw ParameterError("solver: frequency grid must cover [0.05, 20]");
    quadrature.validate();
}

std::vector<std::string> SolverConfig::warnings() const {
    std::vector<std::string> out;
    if (s > s_guard) {
        std::ostringstream msg;
        msg << "s = " << s << " exceeds the guard " << s_guard << "; contraction is not established there";
        out.push_back(msg.str());
    }
    return out;
}

RadialGrid SolverConfig::radii() const { return RadialGrid(grid.r_min, grid.r_max, grid.r_count); }
RadialGrid SolverConfig::frequencies() const { return RadialGrid(grid.rho_min, grid.rho_max, grid.rho_count); }

double t_star(double t1) { return 0.5 * t1 + 1.0; }
SobolevSpec monitor_orders(double t1) { return {{t_star(t1) - 2.0, t1 - 1.0}}; }
SobolevSpec gradient_orders(double t1) { return {{t_star(t1) - 1.0, t1}}; }

ProfileArgument ProfileState::profile() const {
    LinearProfile lin(s);
    if (g_spectral.values().empty() || g_spectral.is_zero()) return ProfileArgument(lin);
    return ProfileArgument(lin, Jg_physical, Jg_gradient);
}

ProfileState initial_state(const SolverConfig& config) {
    config.validate();
    ProfileState st;
    st.s = config.s;
    st.t1 = config.t1;
    st.t_star = t_star(config.t1);
    const RadialGrid radii = config.radii();
    st.g_spectral = SpectralField::zero(config.frequencies());
    st.Jg_physical = RadialField(radii, std::vector<double>(radii.size(), 0.0), {}, Parity::even, 0.0);
    st.Jg_gradient = RadialField(radii, std::vector<double>(radii.size(), 0.0), {}, Parity::odd);
    return st;
}

SpectralField correction_from_laplacian(const SpectralField& laplacian_T) {
    const RadialGrid& grid = laplacian_T.grid();
    if (laplacian_T.is_zero()) return SpectralField::zero(grid);
    SpectralField target = laplacian_T.times_power(-2.0).scaled(-1.0);
    SpectralField resolved = resolvent_L(target);
    return resolved.times_power(2.0).scaled(-1.0);
}

TransformedT transformed_T(const ProfileArgument& k, const SolverConfig& config) {
    const RadialGrid radii = config.radii();
    const RadialGrid freq = config.frequencies();
    GridEvaluation T = evaluate_T_grid(k, k, radii, config.quadrature);
    SpectralField lap = laplacian_spectrum_from_gradient(radial_gradient(T.field), freq);
    return {std::move(T), std::move(lap)};
}

SpectralField forcing_phi(double s, double t1, const SolverConfig& config) {
    if (!(s >= 0.0)) throw ParameterError("forcing_phi: s must be non-negative");
    SolverConfig c = config;
    c.s = s;
    c.t1 = t1;
    c.validate();
    if (s == 0.0) return SpectralField::zero(c.frequencies());
    return correction_from_laplacian(transformed_T(LinearProfile(s), c).laplacian);
}

namespace {

// State built from a new correction spectrum; the physical inverse Laplacian
// of the inverse transform must agree with the spectral one.
ProfileState assemble(const ProfileState& previous, SpectralField g, const SolverConfig& config, double& cross_check) {
    const RadialGrid radii = config.radii();
    ProfileState next = previous;
    next.iteration = previous.iteration + 1;
    cross_check = 0.0;
    if (g.is_zero()) {
        next.g_spectral = std::move(g);
        next.Jg_physical = RadialField(radii, std::vector<double>(radii.size(), 0.0), {}, Parity::even, 0.0);
        next.Jg_gradient = RadialField(radii, std::vector<double>(radii.size(), 0.0), {}, Parity::odd);
        return next;
    }
    next.Jg_physical = inverse_laplacian_spectral(g, radii);
    next.Jg_gradient = inverse_laplacian_spectral_gradient(g, radii);
    RadialField physical = inverse_laplacian_J(hankel_inverse(g, radii));
    cross_check = sup_relative(physical.values(), next.Jg_physical.values());
    if (cross_check > config.cross_check_tolerance) {
        std::ostringstream msg;
        msg << "spectral and physical inverse Laplacian disagree at iteration " << next.iteration << ": "
            << cross_check << " > " << config.cross_check_tolerance;
        throw ConsistencyError(msg.str(), cross_check);
    }
    next.g_spectral = std::move(g);
    return next;
}

ProfileState apply_map(const ProfileState& state, const SolverConfig& config, SpectralField* laplacian_out) {
    const auto start = std::chrono::steady_clock::now();
    const SobolevSpec orders = monitor_orders(config.t1);
    if (state.s == 0.0) {
        ProfileState next = state;
        next.iteration += 1;
        next.history.push_back({next.iteration, 0.0, 0.0, 0.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0,
                                seconds_since(start)});
        if (laplacian_out) *laplacian_out = SpectralField::zero(config.frequencies());
        return next;
    }
    TransformedT T = transformed_T(state.profile(), config);
    SpectralField g = correction_from_laplacian(T.laplacian);
    IterationRecord rec;
    rec.norm = intersection_norm(g, orders);
    rec.delta = intersection_norm(g - state.g_spectral, orders);
    rec.relative_delta = rec.norm > 0.0 ? rec.delta / rec.norm : rec.delta;
    rec.ratio = std::numeric_limits<double>::quiet_NaN();
    if (!state.history.empty() && state.history.back().delta > 0.0 && state.iteration >= 1)
        rec.ratio = rec.delta / state.history.back().delta;
    rec.quadrature_error = T.grid.max_error;
    if (laplacian_out) *laplacian_out = T.laplacian;
    ProfileState next = assemble(state, std::move(g), config, rec.cross_check);
    rec.iteration = next.iteration;
    rec.seconds = seconds_since(start);
    next.history.push_back(rec);
    return next;
}

}  // namespace

ProfileState fixed_point_map(const ProfileState& state, const SolverConfig& config) {
    config.validate();
    return apply_map(state, config, nullptr);
}

double state_consistency(const ProfileState& state, const SolverConfig& config, double lo, double hi) {
    if (state.g_spectral.is_zero()) return 0.0;
    const RadialGrid freq = config.frequencies();
    SpectralField lap = hankel_forward(radial_laplacian(state.Jg_physical), freq);
    double diff = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < freq.size(); ++j) {
        if (freq[j] < lo || freq[j] > hi) continue;
        diff = std::max(diff, std::abs(lap.values()[j] - state.g_spectral.values()[j]));
        scale = std::max(scale, std::abs(state.g_spectral.values()[j]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

ResidualReport profile_residual(const ProfileState& state, const SpectralField& laplacian_T,
                                const SolverConfig& config) {
    const RadialGrid freq = config.frequencies();
    SpectralField lap_k = klin_laplacian_spectrum(LinearProfile(state.s), freq);
    if (!state.g_spectral.is_zero()) lap_k = lap_k + state.g_spectral;
    ResidualReport rep;
    rep.residual = linear_part_residual(lap_k, laplacian_T);
    const double t = state.t1 - 1.0;
    rep.absolute = weighted_l2(rep.residual, t, rep.rho_lo, rep.rho_hi);
    rep.reference = weighted_l2(laplacian_T, t, rep.rho_lo, rep.rho_hi);
    rep.relative = rep.reference > 0.0 ? rep.absolute / rep.reference : rep.absolute;
    return rep;
}

ResidualReport profile_residual(const ProfileState& state, const SolverConfig& config) {
    config.validate();
    if (state.s == 0.0) return profile_residual(state, SpectralField::zero(config.frequencies()), config);
    return profile_residual(state, transformed_T(state.profile(), config).laplacian, config);
}

CorrectionNorms correction_norms(const ProfileState& state) {
    CorrectionNorms out;
    const RadialGrid& radii = state.Jg_physical.grid();
    out.gamma1_window = {1, state.t1 - 1.0, radii.lo(), radii.hi()};
    out.gamma2_window = {2, state.t1 - 2.0, 10.0 * radii.lo(), radii.hi() / 10.0};
    if (state.g_spectral.is_zero()) return out;
    out.correction_norm = intersection_norm(state.g_spectral, monitor_orders(state.t1));
    // |xi| |J^| = |g^| / rho
    out.gradient_norm = intersection_norm(state.g_spectral.times_power(-1.0), gradient_orders(state.t1));
    out.linf_gamma1 = weighted_linf(state.Jg_gradient, out.gamma1_window);
    // Hessian of a radial function: eigenvalues f'' and f'/r
    RadialField second = radial_gradient(state.Jg_gradient);
    std::vector<double> hess(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i)
        hess[i] = std::max(std::abs(second.values()[i]), std::abs(state.Jg_gradient.values()[i] / radii[i]));
    out.linf_gamma2 = weighted_linf(RadialField(radii, std::move(hess)), out.gamma2_window);
    return out;
}

SolveResult solve(const SolverConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    RunDiagnostics& diag = result.diagnostics;
    diag.warnings = config.warnings();
    ProfileState state = initial_state(config);
    if (config.s == 0.0) {
        diag.converged = true;
        diag.residual = profile_residual(state, SpectralField::zero(config.frequencies()), config);
        diag.seconds = seconds_since(start);
        result.state = std::move(state);
        return result;
    }
    bool converged = false;
    while (state.iteration < config.max_iterations) {
        state = apply_map(state, config, nullptr);
        const IterationRecord& rec = state.history.back();
        if (state.iteration > 1 && rec.relative_delta < config.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "fixed-point iteration did not reach relative change " << config.tolerance << " within "
            << config.max_iterations << " iterations (last " << state.history.back().relative_delta << ")";
        throw NonConvergence(msg.str(), state);
    }
    // One more application: fixed-point check and the Laplacian of T[k_s] for the residual.
    SpectralField lap_T;
    ProfileState extra = apply_map(state, config, &lap_T);
    diag.extra_map_change = extra.history.back().relative_delta;
    diag.residual = profile_residual(state, lap_T, config);
    diag.converged = true;
    diag.iterations = state.iteration;
    diag.final_norm = state.history.back().norm;
    diag.final_relative_delta = state.history.back().relative_delta;
    diag.norms = correction_norms(state);
    diag.seconds = seconds_since(start);
    result.state = std::move(state);
    return result;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3) throw ParameterError("fit_loglog: needs at least three matched points");
    auto line = [&](std::size_t from, std::size_t to, double* intercept, double* se) {
        const double m = static_cast<double>(to - from);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = from; i < to; ++i) {
            if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_loglog: values must be positive");
            double lx = std::log(x[i]), ly = std::log(y[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double den = m * sxx - sx * sx;
        if (!(den > 0.0)) throw DomainError("fit_loglog: abscissae must be distinct");
        const double slope = (m * sxy - sx * sy) / den;
        const double icpt = (sy - slope * sx) / m;
        if (intercept) *intercept = icpt;
        if (se) {
            double rss = 0.0;
            for (std::size_t i = from; i < to; ++i) {
                double r = std::log(y[i]) - icpt - slope * std::log(x[i]);
                rss += r * r;
            }
            double sxx_c = sxx - sx * sx / m;
            *se = m > 2 ? std::sqrt(rss / (m - 2) / sxx_c) : 0.0;
        }
        return slope;
    };
    SlopeFit fit;
    fit.slope = line(0, n, &fit.intercept, &fit.standard_error);
    boost::math::students_t dist(static_cast<double>(n - 2));
    const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.ci_low = fit.slope - tq * fit.standard_error;
    fit.ci_high = fit.slope + tq * fit.standard_error;
    fit.first_window = line(0, 3, nullptr, nullptr);
    fit.last_window = line(n - 3, n, nullptr, nullptr);
    fit.window_stable = std::abs(fit.first_window - fit.last_window) <= 0.15;
    return fit;
}

SweepReport sweep_s(const std::vector<double>& s_list, const SolverConfig& config) {
    if (s_list.size() < 4) throw ParameterError("sweep: needs at least four slopes");
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (!(s_list[i] > 0.0)) throw ParameterError("sweep: slopes must be positive");
        if (i > 0 && !(s_list[i] > s_list[i - 1])) throw ParameterError("sweep: slopes must increase");
    }
    config.validate();
    SweepReport rep;
    rep.entries.resize(s_list.size());
    parallel_for(s_list.size(), [&](std::size_t i) {
        SweepEntry& e = rep.entries[i];
        e.s = s_list[i];
        SolverConfig c = config;
        c.s = s_list[i];
        try {
            SolveResult r = solve(c);
            e.ok = true;
            e.iterations = r.diagnostics.iterations;
            e.norms = r.diagnostics.norms;
            e.residual = r.diagnostics.residual.relative;
        } catch (const Error& ex) {
            e.ok = false;
            e.error = ex.what();
        }
    });
    std::vector<double> xs, n0, n1, l1, l2;
    for (const SweepEntry& e : rep.entries) {
        if (!e.ok) {
            rep.partial = true;
            continue;
        }
        xs.push_back(e.s);
        n0.push_back(e.norms.correction_norm);
        n1.push_back(e.norms.gradient_norm);
        l1.push_back(e.norms.linf_gamma1);
        l2.push_back(e.norms.linf_gamma2);
    }
    if (xs.size() >= 3) {
        rep.correction_fit = fit_loglog(xs, n0);
        rep.gradient_fit = fit_loglog(xs, n1);
        rep.linf_gamma1_fit = fit_loglog(xs, l1);
        rep.linf_gamma2_fit = fit_loglog(xs, l2);
    } else {
        rep.partial = true;
    }
    return rep;
}

}  // namespace muskat
