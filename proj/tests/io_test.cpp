#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "muskat/errors.hpp"
#include "muskat/io.hpp"

using namespace muskat;

namespace {
std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "muskat_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}
}  // namespace

TEST_CASE("CSV round trip keeps every bit") {
    CsvColumn a{"r", {1e-3, 0.1, 1.0 / 3.0, 1e300}}, b{"value", {-2.5, 1e-310, std::nextafter(1.0, 2.0), 0.0}};
    auto path = (scratch_dir() / "round.csv").string();
    write_csv(path, {"first line", "second line"}, {a, b});
    auto cols = read_csv(path);
    REQUIRE(cols.size() == 2);
    CHECK(cols[0].name == "r");
    CHECK(cols[1].name == "value");
    CHECK(cols[0].values == a.values);
    CHECK(cols[1].values == b.values);
    CHECK(format_csv({"m"}, {a, b}).rfind("# m\n", 0) == 0);
}

TEST_CASE("CSV columns must have equal length") {
    CHECK_THROWS_AS(format_csv({}, {{"a", {1.0}}, {"b", {1.0, 2.0}}}), ParameterError);
}

TEST_CASE("run configuration") {
    RunConfig c = parse_run_config(R"({"solver": {"s": 0.025, "t1": 1.8}, "grid": {"r_count": 121},
                                       "quadrature": {"n_theta": 128}, "output": {"directory": "out"}})");
    CHECK(c.solver.s == 0.025);
    CHECK(c.solver.t1 == 1.8);
    CHECK(c.solver.grid.r_count == 121);
    CHECK(c.solver.quadrature.n_theta == 128);
    CHECK(c.output.directory == "out");

    RunConfig back = parse_run_config(run_config_to_json(c));
    CHECK(run_config_to_json(back) == run_config_to_json(c));

    CHECK_THROWS_AS(parse_run_config(R"({"solver": {"slope": 0.1}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config(R"({"extras": {}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config("{not json"), ParameterError);
    CHECK_THROWS_AS(load_run_config((scratch_dir() / "missing.json").string()), Error);
}

TEST_CASE("sweep report JSON round trip") {
    SweepReport rep;
    for (double s : {0.0125, 0.025, 0.05, 0.1}) {
        SweepEntry e;
        e.s = s;
        e.ok = s != 0.1;
        e.error = e.ok ? "" : "did not converge";
        e.iterations = 4;
        e.norms.correction_norm = 0.27 * s * s * s;
        e.norms.gradient_norm = e.norms.correction_norm;
        e.norms.linf_gamma1 = 0.44 * s * s * s;
        e.norms.linf_gamma2 = std::numeric_limits<double>::quiet_NaN();
        e.norms.gamma1_window = {1, 0.75, 1e-3, 1e3};
        e.residual = 1e-5;
        rep.entries.push_back(e);
    }
    rep.partial = true;
    rep.correction_fit.slope = 3.0;
    rep.correction_fit.window_stable = true;
    SweepReport back = sweep_from_json(sweep_to_json(rep));
    CHECK(sweep_to_json(back) == sweep_to_json(rep));
    REQUIRE(back.entries.size() == 4);
    CHECK(back.partial);
    CHECK(back.entries[3].error == "did not converge");
    CHECK(std::isnan(back.entries[0].norms.linf_gamma2));
    CHECK(back.entries[1].norms.correction_norm == rep.entries[1].norms.correction_norm);
}

TEST_CASE("history table") {
    std::vector<IterationRecord> h(2);
    h[0].iteration = 1;
    h[0].ratio = std::numeric_limits<double>::quiet_NaN();
    h[1].iteration = 2;
    h[1].ratio = 0.01;
    auto cols = history_columns(h);
    REQUIRE(!cols.empty());
    CHECK(cols[0].name == "iteration");
    CHECK(cols[0].values == std::vector<double>{1.0, 2.0});
}
