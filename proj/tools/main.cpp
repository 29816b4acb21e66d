#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "checks.hpp"
#include "muskat/hankel.hpp"
#include "muskat/io.hpp"
#include "muskat/parallel.hpp"
#include "muskat/profile.hpp"
#include "muskat/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace muskat;

namespace {

constexpr const char* kToolVersion = "0.1.0";

enum Exit { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNotConverged = 3 };

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string tag(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Written before any other output and rewritten when the run ends.
class Manifest {
public:
    Manifest(fs::path dir, std::string command, const RunConfig& config) : dir_(std::move(dir)) {
        doc_ = {{"command", std::move(command)},
                {"tool_version", kToolVersion},
                {"started", utc_now()},
                {"status", "running"},
                {"config", json::parse(run_config_to_json(config))},
                {"outputs", json::array()},
                {"checks", json::array()}};
        flush();
    }
    void output(const fs::path& p) { doc_["outputs"].push_back(p.filename().string()); }
    void check(const std::string& name, bool pass, double measured, double tolerance) {
        doc_["checks"].push_back({{"name", name}, {"pass", pass}, {"measured", measured}, {"tolerance", tolerance}});
    }
    void finish(const std::string& status) {
        doc_["status"] = status;
        doc_["finished"] = utc_now();
        flush();
    }

private:
    void flush() { write_text_file((dir_ / "manifest.json").string(), doc_.dump(2) + "\n"); }
    fs::path dir_;
    json doc_;
};

fs::path output_dir(const std::string& requested, const RunConfig& cfg, const std::string& default_name) {
    fs::path dir;
    if (!requested.empty()) {
        dir = requested;
    } else if (!cfg.output.directory.empty()) {
        dir = cfg.output.directory;
    } else {
        const char* root = std::getenv("MUSKAT_OUT_ROOT");
        dir = fs::path(root && *root ? root : "runs") / default_name;
    }
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> spectral_metadata(const std::string& what) {
    return {what, std::string("hankel convention: ") + kHankelConvention};
}

void write_profile_outputs(const fs::path& dir, const SolveResult& res, Manifest& manifest) {
    const ProfileState& st = res.state;
    const RadialGrid& radii = st.Jg_physical.grid();
    LinearProfile lin(st.s);
    CsvColumn r{"r", radii.nodes()}, k{"k", {}}, kl{"k_lin", {}}, corr{"correction", {}}, dcorr{"correction_dr", {}},
        dk{"k_dr", {}}, d2{"correction_drr", {}};
    RadialField second = radial_gradient(st.Jg_gradient);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double x = radii[i];
        kl.values.push_back(klin_value(lin, x));
        corr.values.push_back(st.Jg_physical.values()[i]);
        k.values.push_back(kl.values.back() + corr.values.back());
        dcorr.values.push_back(st.Jg_gradient.values()[i]);
        dk.values.push_back(klin_gradient(lin, x) + dcorr.values.back());
        d2.values.push_back(second.values()[i]);
    }
    std::ostringstream meta;
    meta << "profile k = k_lin + J[g], s = " << tag(st.s) << ", t1 = " << tag(st.t1) << ", additive constant 0";
    fs::path p = dir / "profile.csv";
    write_csv(p.string(), {meta.str()}, {r, k, kl, corr, dk, dcorr, d2});
    manifest.output(p);

    const SpectralField& g = st.g_spectral;
    CsvColumn rho{"rho", g.grid().nodes()}, gv{"g_hat", g.values()};
    fs::path ps = dir / "correction_spectrum.csv";
    write_csv(ps.string(), spectral_metadata("Laplacian of the correction, g_hat(rho)"), {rho, gv});
    manifest.output(ps);
}

void write_history(const fs::path& dir, const ProfileState& st, Manifest& manifest) {
    fs::path p = dir / "history.csv";
    write_csv(p.string(), {"fixed-point iteration history; ratio = delta_n / delta_{n-1}"}, history_columns(st.history));
    manifest.output(p);
}

RunConfig load_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    if (!fs::exists(path)) throw ParameterError("config file '" + path + "' does not exist");
    return load_run_config(path);
}

int run_checks(const std::string& command, const std::vector<cli::CheckResult>& results, const fs::path& dir,
               const RunConfig& cfg) {
    Manifest manifest(dir, command, cfg);
    std::cout << cli::format_table(results);
    for (const auto& c : results) manifest.check(c.name, c.pass, c.measured, c.tolerance);
    std::vector<CsvColumn> cols{{"measured", {}}, {"tolerance", {}}, {"pass", {}}};
    std::vector<std::string> meta;
    for (const auto& c : results) {
        cols[0].values.push_back(c.measured);
        cols[1].values.push_back(c.tolerance);
        cols[2].values.push_back(c.pass ? 1.0 : 0.0);
        meta.push_back("row " + std::to_string(meta.size()) + ": " + c.name + (c.note.empty() ? "" : " (" + c.note + ")"));
    }
    fs::path p = dir / "checks.csv";
    write_csv(p.string(), meta, cols);
    manifest.output(p);
    bool ok = cli::all_pass(results);
    manifest.finish(ok ? "pass" : "fail");
    return ok ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar profile construction for the 3D Muskat problem"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    unsigned jobs = 1;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory (default $MUSKAT_OUT_ROOT/<run>)");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* selftest = app.add_subcommand("selftest", "analytic anchor checks");
    std::optional<double> tolerance;
    selftest->add_option("--tolerance", tolerance, "replace every check tolerance");

    auto* solve_cmd = app.add_subcommand("solve", "construct the profile for one slope");
    std::optional<double> s_opt, t1_opt;
    solve_cmd->add_option("--s", s_opt, "asymptotic slope s");
    solve_cmd->add_option("--t1", t1_opt, "Sobolev exponent t1 in (3/2, 2)");

    auto* sweep_cmd = app.add_subcommand("sweep", "solve for several slopes and fit the s-scaling");
    std::vector<double> s_list{0.0125, 0.025, 0.05, 0.1};
    sweep_cmd->add_option("--s-list", s_list, "slopes (comma separated)")->delimiter(',');
    sweep_cmd->add_option("--t1", t1_opt, "Sobolev exponent t1 in (3/2, 2)");

    auto* verify = app.add_subcommand("verify", "module invariant suites");
    std::string suite;
    std::uint64_t seed = cli::SuiteOptions{}.seed;
    verify->add_option("--suite", suite, "operators | nonlinear | taylor")->required();
    verify->add_option("--seed", seed, "seed for sampled radii");
    verify->add_option("--tolerance", tolerance, "replace every check tolerance");

    for (auto* sub : {selftest, solve_cmd, sweep_cmd, verify}) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kConfigError;
    }
    set_worker_count(jobs);

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        if (s_opt) cfg.solver.s = *s_opt;
        if (t1_opt) cfg.solver.t1 = *t1_opt;
        cfg.solver.validate();
        if (tolerance && !(*tolerance >= 0.0)) throw ParameterError("--tolerance must be non-negative");
    } catch (const Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (selftest->parsed()) {
            cli::SuiteOptions opt;
            opt.tolerance = tolerance;
            opt.quadrature = cfg.solver.quadrature;
            return run_checks("selftest", cli::selftest_suite(opt), output_dir(out_dir, cfg, "selftest"), cfg);
        }
        if (verify->parsed()) {
            cli::SuiteOptions opt;
            opt.tolerance = tolerance;
            opt.seed = seed;
            opt.quadrature = cfg.solver.quadrature;
            std::vector<cli::CheckResult> results;
            if (suite == "operators")
                results = cli::operators_suite(opt);
            else if (suite == "nonlinear")
                results = cli::nonlinear_suite(opt);
            else if (suite == "taylor")
                results = cli::taylor_suite(opt);
            else {
                std::cerr << "configuration error: unknown suite '" << suite << "'\n";
                return kConfigError;
            }
            return run_checks("verify " + suite, results, output_dir(out_dir, cfg, "verify-" + suite), cfg);
        }
        if (solve_cmd->parsed()) {
            const SolverConfig& sc = cfg.solver;
            fs::path dir = output_dir(out_dir, cfg, "solve-s" + tag(sc.s) + "-t" + tag(sc.t1));
            Manifest manifest(dir, "solve", cfg);
            for (const auto& w : sc.warnings()) std::cerr << "warning: " << w << "\n";
            try {
                SolveResult res = solve(sc);
                write_profile_outputs(dir, res, manifest);
                write_history(dir, res.state, manifest);
                fs::path dj = dir / "diagnostics.json";
                write_text_file(dj.string(), diagnostics_to_json(res.diagnostics, res.state) + "\n");
                manifest.output(dj);
                const RunDiagnostics& d = res.diagnostics;
                std::printf("converged in %d iterations: |g| = %.6e, residual %.3e, extra map change %.3e\n",
                            d.iterations, d.final_norm, d.residual.relative, d.extra_map_change);
                double worst_cross = 0.0;
                for (const auto& rec : res.state.history) worst_cross = std::max(worst_cross, rec.cross_check);
                manifest.check("profile_residual", d.residual.relative < 5e-3, d.residual.relative, 5e-3);
                manifest.check("extra_map_change", d.extra_map_change < 2.0 * sc.tolerance, d.extra_map_change,
                               2.0 * sc.tolerance);
                manifest.check("representation_cross_check", worst_cross < sc.cross_check_tolerance, worst_cross,
                               sc.cross_check_tolerance);
                manifest.finish("converged");
                return kPass;
            } catch (const NonConvergence& e) {
                write_history(dir, e.state(), manifest);
                fs::path hj = dir / "history.json";
                write_text_file(hj.string(), history_to_json(e.state().history) + "\n");
                manifest.output(hj);
                manifest.finish("not converged");
                std::cerr << e.what() << "\n";
                return kNotConverged;
            }
        }
        if (sweep_cmd->parsed()) {
            if (s_list.size() < 4) {
                std::cerr << "configuration error: the fit needs at least four slopes\n";
                return kConfigError;
            }
            fs::path dir = output_dir(out_dir, cfg, "sweep-t" + tag(cfg.solver.t1));
            Manifest manifest(dir, "sweep", cfg);
            SweepReport rep = sweep_s(s_list, cfg.solver);
            fs::path pj = dir / "sweep.json";
            write_text_file(pj.string(), sweep_to_json(rep) + "\n");
            manifest.output(pj);
            std::vector<CsvColumn> cols{{"s", {}},           {"ok", {}},          {"iterations", {}},
                                        {"correction_norm", {}}, {"gradient_norm", {}}, {"linf_gamma1", {}},
                                        {"linf_gamma2", {}},  {"residual", {}}};
            for (const SweepEntry& e : rep.entries) {
                cols[0].values.push_back(e.s);
                cols[1].values.push_back(e.ok);
                cols[2].values.push_back(e.iterations);
                cols[3].values.push_back(e.norms.correction_norm);
                cols[4].values.push_back(e.norms.gradient_norm);
                cols[5].values.push_back(e.norms.linf_gamma1);
                cols[6].values.push_back(e.norms.linf_gamma2);
                cols[7].values.push_back(e.residual);
            }
            fs::path pc = dir / "sweep.csv";
            write_csv(pc.string(), {"correction size measures per slope s"}, cols);
            manifest.output(pc);
            auto line = [](const char* name, const SlopeFit& f) {
                std::printf("%-16s slope %.4f  95%% CI [%.4f, %.4f]  windows %.4f / %.4f\n", name, f.slope, f.ci_low,
                            f.ci_high, f.first_window, f.last_window);
            };
            line("correction", rep.correction_fit);
            line("gradient", rep.gradient_fit);
            line("linf_gamma1", rep.linf_gamma1_fit);
            line("linf_gamma2", rep.linf_gamma2_fit);
            manifest.finish(rep.partial ? "partial" : "complete");
            return rep.partial ? kNotConverged : kPass;
        }
    } catch (const ParameterError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return kConfigError;
}
