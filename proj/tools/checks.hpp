#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "muskat/polar_quadrature.hpp"

namespace muskat::cli {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

// Every suite takes an optional tolerance that replaces the built-in ones.
struct SuiteOptions {
    std::optional<double> tolerance;
    std::uint64_t seed = 20240521;
    QuadratureSpec quadrature;
};

std::vector<CheckResult> selftest_suite(const SuiteOptions& options);
std::vector<CheckResult> operators_suite(const SuiteOptions& options);
std::vector<CheckResult> nonlinear_suite(const SuiteOptions& options);
std::vector<CheckResult> taylor_suite(const SuiteOptions& options);

std::string format_table(const std::vector<CheckResult>& results);
bool all_pass(const std::vector<CheckResult>& results);

}  // namespace muskat::cli
