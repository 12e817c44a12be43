// Configuration parsing, the bundled experiment presets, cross-validation
// against the resolved model, and the exact-decimal CSV round-trips.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nlfv/config.hpp"
#include "nlfv/io.hpp"

using namespace nlfv;

namespace {

std::string parse_error(const std::string& text) {
    try {
        parse_config(text, "test.yaml");
    } catch (const ConfigError& err) {
        return err.what();
    }
    return {};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::string kMinimal1d = R"(model:
  id: kk1d
grid:
  x_left: 0.0
  x_right: 4.0
  n_cells: 160
time:
  t_end: 0.1
)";

}  // namespace

TEST_CASE("preset: the 1D reference experiment pins every constant") {
    const RunConfig config = preset_config("paper-1d");
    CHECK(config.model_id == "kk1d");
    CHECK(config.x_left == 0.0);
    CHECK(config.x_right == 4.0);
    CHECK(config.n_cells == 640);
    CHECK(config.scheme.family == FluxFamily::lax_friedrichs);
    CHECK(config.scheme.theta == 1.0 / 3.0);
    CHECK(config.scheme.cfl_safety == 1.0);
    CHECK(config.scheme.quadrature == QuadratureRule::mean);
    CHECK_FALSE(config.scheme.debug_antidiffusion);
    CHECK(config.t_end == 0.3);
    CHECK(config.snapshot_times == std::vector<double>{0.0, 0.15, 0.3});
    CHECK(config.monitor_stability);
    CHECK(config.monitor_conv_differences);
    CHECK(config.converge_levels == 5);
    CHECK(config.entropy_alphas == 21);
    CHECK(config.entropy_tolerance == 1e-12);
    CHECK(config.seed == 0);

    const ModelSpec model = builtin_model(config.model_id);
    CHECK_NOTHROW(validate_config(config, model));
    CHECK(max_stable_lambda(model, config.scheme) == 1.0 / 7.0);
}

TEST_CASE("preset: the 2D reference experiment pins every constant") {
    const RunConfig config = preset_config("paper-2d");
    CHECK(config.model_id == "kk2d");
    CHECK(config.x_left == -1.1);
    CHECK(config.x_right == 1.1);
    CHECK(config.n_cells == 44);
    CHECK(config.y_left == -1.1);
    CHECK(config.y_right == 1.1);
    CHECK(config.ny == 44);
    CHECK(config.scheme.theta == 1.0 / 3.0);
    CHECK(config.scheme.quadrature == QuadratureRule::left);
    CHECK(config.t_end == 0.1);
    CHECK(config.snapshot_times == std::vector<double>{0.0, 0.1});
    CHECK(config.monitor_stability);
    CHECK_FALSE(config.monitor_conv_differences);
    CHECK(config.converge_levels == 5);

    const ModelSpec model = builtin_model(config.model_id);
    CHECK_NOTHROW(validate_config(config, model));
    CHECK(max_stable_lambda_2d(model, config.scheme) == 1.0 / 14.0);
}

TEST_CASE("preset: unknown names are rejected") {
    CHECK_THROWS_AS(preset_config("paper-3d"), ConfigError);
    CHECK_THROWS_AS(preset_text(""), ConfigError);
}

TEST_CASE("parser: defaults fill everything the file leaves out") {
    const RunConfig config = parse_config(kMinimal1d, "test.yaml");
    CHECK(config.model_id == "kk1d");
    CHECK(config.scheme.family == FluxFamily::lax_friedrichs);
    CHECK(config.scheme.theta == 1.0 / 3.0);
    CHECK(config.scheme.cfl_safety == 1.0);
    CHECK(config.scheme.quadrature == QuadratureRule::mean);
    CHECK(config.snapshot_times.empty());
    CHECK(config.monitor_stability);
    CHECK_FALSE(config.monitor_conv_differences);
    CHECK(config.converge_levels == 4);
    CHECK(config.entropy_alphas == 21);
    CHECK(config.entropy_tolerance == 1e-12);
}

TEST_CASE("parser: positions and names appear in the errors") {
    std::string msg = parse_error(R"(model:
  id: kk1d
  extra: 1
grid:
  x_left: 0.0
  x_right: 4.0
  n_cells: 160
time:
  t_end: 0.1
)");
    CHECK(msg.find("test.yaml:3") != std::string::npos);
    CHECK(msg.find("unknown key 'extra'") != std::string::npos);

    msg = parse_error("model:\n  id: kk1d\nbogus: {}\n");
    CHECK(msg.find("unknown key 'bogus'") != std::string::npos);

    msg = parse_error("model:\n  id: kk1d\n");
    CHECK(msg.find("missing required section 'grid'") != std::string::npos);

    msg = parse_error(
        "model:\n  id: kk1d\ngrid:\n  x_left: 0.0\n  x_right: 4.0\n"
        "time:\n  t_end: 0.1\n");
    CHECK(msg.find("missing required key 'n_cells'") != std::string::npos);

    msg = parse_error(
        "model:\n  id: kk1d\ngrid:\n  x_left: 0.0\n  x_right: 4.0\n"
        "  n_cells: plenty\ntime:\n  t_end: 0.1\n");
    CHECK(msg.find("'n_cells' must be") != std::string::npos);

    msg = parse_error(kMinimal1d + "scheme:\n  flux: roe\n");
    CHECK(msg.find("unknown flux family") != std::string::npos);

    msg = parse_error(kMinimal1d + "scheme:\n  quadrature: gauss\n");
    CHECK(msg.find("quadrature") != std::string::npos);

    // Malformed YAML reports the parser position.
    msg = parse_error("model: [unterminated\n");
    CHECK(msg.find("test.yaml") != std::string::npos);

    // A scalar top level is not a config.
    msg = parse_error("just a string");
    CHECK(msg.find("top level must be a mapping") != std::string::npos);
}

TEST_CASE("validation: cross-checks between config and model") {
    const ModelSpec model = builtin_model("kk1d");

    RunConfig config = preset_config("paper-1d");
    config.scheme.theta = 0.7;
    CHECK_THROWS_AS(validate_config(config, model), DegenerateModel);

    config = preset_config("paper-1d");
    config.n_cells = 10;  // dx = 0.4 leaves no sample inside the kernel
    CHECK_THROWS_AS(validate_config(config, model), InsufficientResolution);

    config = preset_config("paper-1d");
    config.n_cells = 0;
    CHECK_THROWS_AS(validate_config(config, model), ConfigError);

    config = preset_config("paper-1d");
    config.snapshot_times = {0.5};
    CHECK_THROWS_AS(validate_config(config, model), ConfigError);

    config = preset_config("paper-1d");
    config.scheme.cfl_safety = 1.5;
    CHECK_THROWS_AS(validate_config(config, model), ConfigError);

    config = preset_config("paper-1d");
    config.entropy_tolerance = 0.0;
    CHECK_THROWS_AS(validate_config(config, model), ConfigError);

    config = preset_config("paper-1d");
    config.t_end = -1.0;
    CHECK_THROWS_AS(validate_config(config, model), ConfigError);

    // 2D: rectangular cells are rejected.
    const ModelSpec model2d = builtin_model("kk2d");
    RunConfig conf2d = preset_config("paper-2d");
    conf2d.ny = 40;
    CHECK_THROWS_AS(validate_config(conf2d, model2d), ConfigError);

    conf2d = preset_config("paper-2d");
    conf2d.ny = 0;
    CHECK_THROWS_AS(validate_config(conf2d, model2d), ConfigError);
}

TEST_CASE("config files load from disk") {
    const std::filesystem::path path = temp_file("nlfv_config_test.yaml");
    {
        std::ofstream out(path, std::ios::binary);
        out << kMinimal1d;
    }
    const RunConfig config = load_config_file(path.string());
    CHECK(config.model_id == "kk1d");
    CHECK(config.n_cells == 160);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_config_file("/nonexistent/nlfv.yaml"), ConfigError);
}

TEST_CASE("format_double: shortest exact decimal form") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");

    // Round-trip property over a spread of magnitudes.
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    for (int trial = 0; trial < 2000; ++trial) {
        const double value =
            std::ldexp(mantissa(rng), exponent(rng));
        const std::string text = format_double(value);
        const double back = std::strtod(text.c_str(), nullptr);
        CHECK(back == value);
    }
}

TEST_CASE("csv: write(read(file)) is byte-identical") {
    const std::filesystem::path first = temp_file("nlfv_csv_a.csv");
    const std::filesystem::path second = temp_file("nlfv_csv_b.csv");

    CsvTable table;
    table.header = {"a", "b", "c"};
    table.rows = {
        {1.0 / 3.0, 0.1, -0.0},
        {6.02214076e23, 1e-300, 7.0},
        {std::numeric_limits<double>::quiet_NaN(),
         std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity()},
    };
    write_csv(first, table);

    const CsvTable parsed = read_csv(first);
    REQUIRE(parsed.header == table.header);
    REQUIRE(parsed.rows.size() == 3);
    CHECK(parsed.rows[1][0] == 6.02214076e23);
    write_csv(second, parsed);

    CHECK(slurp(first) == slurp(second));
    std::filesystem::remove(first);
    std::filesystem::remove(second);
}

TEST_CASE("csv: parse failures carry the file position") {
    const std::filesystem::path path = temp_file("nlfv_csv_bad.csv");
    {
        std::ofstream out(path, std::ios::binary);
        out << "x,u1\n0.5,1.0\n0.75,oops\n";
    }
    try {
        read_csv(path);
        CHECK(false);
    } catch (const IoError& err) {
        const std::string msg = err.what();
        CHECK(msg.find(":3") != std::string::npos);
        CHECK(msg.find("cannot parse number") != std::string::npos);
    }
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_csv("/nonexistent/nlfv.csv"), IoError);
}

TEST_CASE("state and diagnostics files have the documented shape") {
    const ModelSpec model = builtin_kk1d();
    const Grid1D grid(0.0, 4.0, 160);
    SchemeConfig scheme;
    const RunResult result = run(model, grid, scheme, 0.05);

    const std::filesystem::path state_path = temp_file("nlfv_state.csv");
    write_state_csv(state_path, result.state);
    const CsvTable state_csv = read_csv(state_path);
    CHECK(state_csv.header ==
          std::vector<std::string>{"x", "u1", "u2"});
    REQUIRE(state_csv.rows.size() == 160);
    CHECK(state_csv.rows[0][0] == grid.center(0));
    CHECK(state_csv.rows[159][0] == grid.center(159));
    std::filesystem::remove(state_path);

    const std::filesystem::path diag_path = temp_file("nlfv_diag.csv");
    write_diagnostics_csv(diag_path, result);
    const CsvTable diag_csv = read_csv(diag_path);
    CHECK(diag_csv.header ==
          std::vector<std::string>{"step", "t", "dt", "min_value", "l1_u1",
                                   "l1_u2", "linf_w1", "linf_w2", "tv_w1",
                                   "tv_w2", "increment_l1"});
    CHECK(diag_csv.rows.size() == result.series.size());
    CHECK(diag_csv.rows[0][0] == 0.0);
    CHECK(diag_csv.rows.back()[1] == 0.05);

    // Re-emitting a parsed diagnostics file reproduces it byte for byte.
    const std::filesystem::path copy_path = temp_file("nlfv_diag_copy.csv");
    write_csv(copy_path, diag_csv);
    CHECK(slurp(diag_path) == slurp(copy_path));
    std::filesystem::remove(diag_path);
    std::filesystem::remove(copy_path);
}

TEST_CASE("convergence and entropy files have the documented shape") {
    ConvergenceTable table;
    table.rows = {{64, 0.05, 2e-3, 1.1}, {128, 0.025, 9e-4, 1.05},
                  {256, 0.0125, 4.5e-4,
                   std::numeric_limits<double>::quiet_NaN()}};
    table.finest_rate = 1.05;
    table.rate_floor = 1.0 / 3.0;
    table.rate_margin = 0.05;
    table.meets_floor = true;

    const std::filesystem::path csv_path = temp_file("nlfv_conv.csv");
    write_convergence_csv(csv_path, table);
    const CsvTable parsed = read_csv(csv_path);
    CHECK(parsed.header == std::vector<std::string>{"dx", "e", "alpha"});
    REQUIRE(parsed.rows.size() == 3);
    CHECK(parsed.rows[0][0] == 0.05);
    CHECK(parsed.rows[0][2] == 1.1);
    CHECK(std::isnan(parsed.rows[2][2]));
    std::filesystem::remove(csv_path);

    const std::filesystem::path loglog_path = temp_file("nlfv_conv.dat");
    write_loglog_data(loglog_path, table);
    const std::string loglog = slurp(loglog_path);
    CHECK(loglog.find("0.05 0.002") == 0);
    std::filesystem::remove(loglog_path);

    const std::filesystem::path entropy_path = temp_file("nlfv_entropy.csv");
    write_entropy_csv(entropy_path, {{0.0, 1e-16}, {0.5, 3e-15}});
    const CsvTable entropy = read_csv(entropy_path);
    CHECK(entropy.header ==
          std::vector<std::string>{"alpha", "max_residual"});
    REQUIRE(entropy.rows.size() == 2);
    CHECK(entropy.rows[1][0] == 0.5);
    std::filesystem::remove(entropy_path);

    const std::filesystem::path meta_path = temp_file("nlfv_meta.txt");
    write_meta(meta_path, {{"model", "kk1d"}, {"dx", "0.00625"}});
    CHECK(slurp(meta_path) == "model: kk1d\ndx: 0.00625\n");
    std::filesystem::remove(meta_path);
}
