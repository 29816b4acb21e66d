#pragma once

#include <string>
#include <vector>

#include "muskat/solver.hpp"

namespace muskat {

struct CsvColumn {
    std::string name;
    std::vector<double> values;
};

// Header row, '#'-prefixed metadata lines first, values printed with %.17g.
void write_csv(const std::string& path, const std::vector<std::string>& metadata, const std::vector<CsvColumn>& columns);
std::string format_csv(const std::vector<std::string>& metadata, const std::vector<CsvColumn>& columns);

// Reads a file written by write_csv: metadata lines are skipped.
std::vector<CsvColumn> read_csv(const std::string& path);

// Solver configuration as JSON with sections grid, quadrature, solver, output.
// Unknown sections or keys are ParameterErrors.
struct OutputConfig {
    std::string directory;  // empty: decided by the caller
};
struct RunConfig {
    SolverConfig solver;
    OutputConfig output;
};
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

std::string diagnostics_to_json(const RunDiagnostics& diagnostics, const ProfileState& state);
std::string history_to_json(const std::vector<IterationRecord>& history);
std::string sweep_to_json(const SweepReport& report);
SweepReport sweep_from_json(const std::string& json_text);

// CSV table of the iteration history.
std::vector<CsvColumn> history_columns(const std::vector<IterationRecord>& history);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace muskat
