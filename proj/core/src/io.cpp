#include "muskat/io.hpp"

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "muskat/errors.hpp"

namespace muskat {

using nlohmann::json;

namespace {

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON has no NaN; undefined quantities are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

template <class T>
void read_key(const json& section, const char* key, T& target) {
    if (section.contains(key)) target = section.at(key).get<T>();
}

void reject_unknown(const json& section, const std::string& name, std::initializer_list<const char*> allowed) {
    if (!section.is_object()) throw ParameterError("config: section '" + name + "' must be an object");
    for (auto it = section.begin(); it != section.end(); ++it) {
        bool known = false;
        for (const char* a : allowed) known = known || it.key() == a;
        if (!known) throw ParameterError("config: unknown key '" + it.key() + "' in section '" + name + "'");
    }
}

json fit_json(const SlopeFit& f) {
    return {{"slope", num(f.slope)},           {"intercept", num(f.intercept)},       {"standard_error", num(f.standard_error)},
            {"ci_low", num(f.ci_low)},         {"ci_high", num(f.ci_high)},           {"first_window", num(f.first_window)},
            {"last_window", num(f.last_window)}, {"window_stable", f.window_stable}};
}

SlopeFit fit_from(const json& j) {
    SlopeFit f;
    f.slope = num_from(j.at("slope"));
    f.intercept = num_from(j.at("intercept"));
    f.standard_error = num_from(j.at("standard_error"));
    f.ci_low = num_from(j.at("ci_low"));
    f.ci_high = num_from(j.at("ci_high"));
    f.first_window = num_from(j.at("first_window"));
    f.last_window = num_from(j.at("last_window"));
    f.window_stable = j.at("window_stable").get<bool>();
    return f;
}

json window_json(const WeightedNormSpec& w) {
    return {{"derivative_order", w.derivative_order}, {"weight_exponent", w.weight_exponent}, {"r_lo", w.r_lo},
            {"r_hi", w.r_hi}};
}

WeightedNormSpec window_from(const json& j) {
    return {j.at("derivative_order").get<int>(), num_from(j.at("weight_exponent")), num_from(j.at("r_lo")),
            num_from(j.at("r_hi"))};
}

json norms_json(const CorrectionNorms& n) {
    return {{"correction_norm", num(n.correction_norm)}, {"gradient_norm", num(n.gradient_norm)},
            {"linf_gamma1", num(n.linf_gamma1)},         {"linf_gamma2", num(n.linf_gamma2)},
            {"gamma1_window", window_json(n.gamma1_window)}, {"gamma2_window", window_json(n.gamma2_window)}};
}

CorrectionNorms norms_from(const json& j) {
    CorrectionNorms n;
    n.correction_norm = num_from(j.at("correction_norm"));
    n.gradient_norm = num_from(j.at("gradient_norm"));
    n.linf_gamma1 = num_from(j.at("linf_gamma1"));
    n.linf_gamma2 = num_from(j.at("linf_gamma2"));
    n.gamma1_window = window_from(j.at("gamma1_window"));
    n.gamma2_window = window_from(j.at("gamma2_window"));
    return n;
}

json history_json(const std::vector<IterationRecord>& history) {
    json arr = json::array();
    for (const IterationRecord& r : history)
        arr.push_back({{"iteration", r.iteration}, {"norm", num(r.norm)}, {"delta", num(r.delta)},
                       {"relative_delta", num(r.relative_delta)}, {"ratio", num(r.ratio)},
                       {"cross_check", num(r.cross_check)}, {"quadrature_error", num(r.quadrature_error)},
                       {"seconds", num(r.seconds)}});
    return arr;
}

}  // namespace

std::string format_csv(const std::vector<std::string>& metadata, const std::vector<CsvColumn>& columns) {
    std::ostringstream out;
    for (const std::string& m : metadata) out << "# " << m << '\n';
    std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].values.size() != rows) throw ParameterError("csv: columns differ in length");
        out << (c ? "," : "") << columns[c].name;
    }
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << number(columns[c].values[r]);
        out << '\n';
    }
    return out.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& metadata,
               const std::vector<CsvColumn>& columns) {
    write_text_file(path, format_csv(metadata, columns));
}

std::vector<CsvColumn> read_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::vector<CsvColumn> cols;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(row, cell, ',')) {
            if (!header) {
                cols.push_back({cell, {}});
            } else {
                if (c >= cols.size()) throw ParameterError("csv: row longer than header in " + path);
                // strtod keeps subnormals and reads nan/inf
                char* end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str()) throw ParameterError("csv: bad number '" + cell + "' in " + path);
                cols[c].values.push_back(v);
            }
            ++c;
        }
        header = true;
    }
    return cols;
}

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config: invalid JSON: ") + e.what());
    }
    reject_unknown(root, "<root>", {"grid", "quadrature", "solver", "output"});
    RunConfig cfg;
    try {
        if (root.contains("grid")) {
            const json& g = root["grid"];
            reject_unknown(g, "grid", {"r_min", "r_max", "r_count", "rho_min", "rho_max", "rho_count"});
            GridConfig& gc = cfg.solver.grid;
            read_key(g, "r_min", gc.r_min);
            read_key(g, "r_max", gc.r_max);
            read_key(g, "r_count", gc.r_count);
            read_key(g, "rho_min", gc.rho_min);
            read_key(g, "rho_max", gc.rho_max);
            read_key(g, "rho_count", gc.rho_count);
        }
        if (root.contains("quadrature")) {
            const json& q = root["quadrature"];
            reject_unknown(q, "quadrature", {"a_min", "a_max", "n_theta", "n_radial", "refine_levels", "symmetrize",
                                             "rtol", "atol", "check_stride", "check_accuracy"});
            QuadratureSpec& qs = cfg.solver.quadrature;
            read_key(q, "a_min", qs.a_min);
            read_key(q, "a_max", qs.a_max);
            read_key(q, "n_theta", qs.n_theta);
            read_key(q, "n_radial", qs.n_radial);
            read_key(q, "refine_levels", qs.refine_levels);
            read_key(q, "symmetrize", qs.symmetrize);
            read_key(q, "rtol", qs.rtol);
            read_key(q, "atol", qs.atol);
            read_key(q, "check_stride", qs.check_stride);
            read_key(q, "check_accuracy", qs.check_accuracy);
        }
        if (root.contains("solver")) {
            const json& s = root["solver"];
            reject_unknown(s, "solver",
                           {"s", "t1", "max_iterations", "tolerance", "s_guard", "cross_check_tolerance"});
            SolverConfig& sc = cfg.solver;
            read_key(s, "s", sc.s);
            read_key(s, "t1", sc.t1);
            read_key(s, "max_iterations", sc.max_iterations);
            read_key(s, "tolerance", sc.tolerance);
            read_key(s, "s_guard", sc.s_guard);
            read_key(s, "cross_check_tolerance", sc.cross_check_tolerance);
        }
        if (root.contains("output")) {
            const json& o = root["output"];
            reject_unknown(o, "output", {"directory"});
            read_key(o, "directory", cfg.output.directory);
        }
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config: wrong value type: ") + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_text_file(path)); }

std::string run_config_to_json(const RunConfig& c) {
    const GridConfig& g = c.solver.grid;
    const QuadratureSpec& q = c.solver.quadrature;
    const SolverConfig& s = c.solver;
    json j = {{"grid",
               {{"r_min", g.r_min},
                {"r_max", g.r_max},
                {"r_count", g.r_count},
                {"rho_min", g.rho_min},
                {"rho_max", g.rho_max},
                {"rho_count", g.rho_count}}},
              {"quadrature",
               {{"a_min", q.a_min},
                {"a_max", q.a_max},
                {"n_theta", q.n_theta},
                {"n_radial", q.n_radial},
                {"refine_levels", q.refine_levels},
                {"symmetrize", q.symmetrize},
                {"rtol", q.rtol},
                {"atol", q.atol},
                {"check_stride", q.check_stride},
                {"check_accuracy", q.check_accuracy}}},
              {"solver",
               {{"s", s.s},
                {"t1", s.t1},
                {"max_iterations", s.max_iterations},
                {"tolerance", s.tolerance},
                {"s_guard", s.s_guard},
                {"cross_check_tolerance", s.cross_check_tolerance}}},
              {"output", {{"directory", c.output.directory}}}};
    return j.dump(2);
}

std::string history_to_json(const std::vector<IterationRecord>& history) { return history_json(history).dump(2); }

std::string diagnostics_to_json(const RunDiagnostics& d, const ProfileState& state) {
    json j = {{"converged", d.converged},
              {"iterations", d.iterations},
              {"s", state.s},
              {"t1", state.t1},
              {"t_star", state.t_star},
              {"final_norm", num(d.final_norm)},
              {"final_relative_delta", num(d.final_relative_delta)},
              {"extra_map_change", num(d.extra_map_change)},
              {"norms", norms_json(d.norms)},
              {"residual",
               {{"absolute", num(d.residual.absolute)},
                {"reference", num(d.residual.reference)},
                {"relative", num(d.residual.relative)},
                {"rho_lo", d.residual.rho_lo},
                {"rho_hi", d.residual.rho_hi}}},
              {"seconds", d.seconds},
              {"warnings", d.warnings},
              {"history", history_json(state.history)}};
    return j.dump(2);
}

std::vector<CsvColumn> history_columns(const std::vector<IterationRecord>& history) {
    std::vector<CsvColumn> cols{{"iteration", {}},   {"norm", {}},        {"delta", {}},
                                {"relative_delta", {}}, {"ratio", {}},     {"cross_check", {}},
                                {"quadrature_error", {}}};
    for (const IterationRecord& r : history) {
        cols[0].values.push_back(r.iteration);
        cols[1].values.push_back(r.norm);
        cols[2].values.push_back(r.delta);
        cols[3].values.push_back(r.relative_delta);
        cols[4].values.push_back(r.ratio);
        cols[5].values.push_back(r.cross_check);
        cols[6].values.push_back(r.quadrature_error);
    }
    return cols;
}

std::string sweep_to_json(const SweepReport& rep) {
    json entries = json::array();
    for (const SweepEntry& e : rep.entries)
        entries.push_back({{"s", e.s},
                           {"ok", e.ok},
                           {"error", e.error},
                           {"iterations", e.iterations},
                           {"norms", norms_json(e.norms)},
                           {"residual", num(e.residual)}});
    json j = {{"entries", entries},
              {"partial", rep.partial},
              {"fits",
               {{"correction_norm", fit_json(rep.correction_fit)},
                {"gradient_norm", fit_json(rep.gradient_fit)},
                {"linf_gamma1", fit_json(rep.linf_gamma1_fit)},
                {"linf_gamma2", fit_json(rep.linf_gamma2_fit)}}}};
    return j.dump(2);
}

SweepReport sweep_from_json(const std::string& text) {
    SweepReport rep;
    try {
        json j = json::parse(text);
        for (const json& e : j.at("entries")) {
            SweepEntry s;
            s.s = num_from(e.at("s"));
            s.ok = e.at("ok").get<bool>();
            s.error = e.at("error").get<std::string>();
            s.iterations = e.at("iterations").get<int>();
            s.norms = norms_from(e.at("norms"));
            s.residual = num_from(e.at("residual"));
            rep.entries.push_back(s);
        }
        rep.partial = j.at("partial").get<bool>();
        const json& f = j.at("fits");
        rep.correction_fit = fit_from(f.at("correction_norm"));
        rep.gradient_fit = fit_from(f.at("gradient_norm"));
        rep.linf_gamma1_fit = fit_from(f.at("linf_gamma1"));
        rep.linf_gamma2_fit = fit_from(f.at("linf_gamma2"));
    } catch (const json::exception& e) {
        throw ParameterError(std::string("sweep report: ") + e.what());
    }
    return rep;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw ParameterError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace muskat
