// End-to-end checks of the command line binary named by NLFV_BIN: artifact
// layout, exit codes, and bit-identical reruns.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string binary_path() {
    const char* bin = std::getenv("NLFV_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nlfv_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

long line_count(const std::string& text) {
    long lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

// Runs "NLFV_BIN <args>" with stdout and stderr captured into files inside
// dir and returns the exit code.
int run_cli(const std::string& args, const fs::path& dir,
            const std::string& tag = "cli") {
    const std::string command =
        "'" + binary_path() + "' " + args + " > '" +
        (dir / (tag + ".out")).string() + "' 2> '" +
        (dir / (tag + ".err")).string() + "'";
    const int status = std::system(command.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

const std::string kSmallKk1d = R"(model:
  id: kk1d
grid:
  x_left: 0.0
  x_right: 4.0
  n_cells: 160
time:
  t_end: 0.05
)";

}  // namespace

TEST_CASE("run: the 1D preset writes the documented artifacts") {
    const fs::path dir = fresh_dir("run1d");
    const int code =
        run_cli("run --preset paper-1d --out '" + (dir / "out").string() + "'",
                dir);
    CHECK(code == 0);

    CHECK(fs::exists(dir / "out" / "snapshot_t0.csv"));
    CHECK(fs::exists(dir / "out" / "snapshot_t0.15.csv"));
    CHECK(fs::exists(dir / "out" / "snapshot_t0.3.csv"));
    CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
    CHECK(fs::exists(dir / "out" / "meta.txt"));

    const std::string stdout_text = slurp(dir / "cli.out");
    CHECK(stdout_text.find("model kk1d: 640 cells") != std::string::npos);
    CHECK(stdout_text.find("lambda 0.14285714285714285") !=
          std::string::npos);
    CHECK(stdout_text.find("monitor positivity") != std::string::npos);
    CHECK(stdout_text.find("monitor mass-conservation") != std::string::npos);
    CHECK(stdout_text.find("monitor convolution-increment") !=
          std::string::npos);
    CHECK(stdout_text.find("ok\n") != std::string::npos);

    const std::string meta = slurp(dir / "out" / "meta.txt");
    CHECK(meta.find("model: kk1d\n") != std::string::npos);
    CHECK(meta.find("dx: 0.00625\n") != std::string::npos);
    CHECK(meta.find("flux: lax_friedrichs\n") != std::string::npos);

    // Snapshot files carry one row per cell plus the header.
    CHECK(line_count(slurp(dir / "out" / "snapshot_t0.csv")) == 641);
    fs::remove_all(dir);
}

TEST_CASE("run: the 2D preset writes the documented artifacts") {
    const fs::path dir = fresh_dir("run2d");
    const int code =
        run_cli("run --preset paper-2d --out '" + (dir / "out").string() + "'",
                dir);
    CHECK(code == 0);

    CHECK(fs::exists(dir / "out" / "snapshot_t0.csv"));
    CHECK(fs::exists(dir / "out" / "snapshot_t0.1.csv"));
    CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
    CHECK(fs::exists(dir / "out" / "meta.txt"));

    const std::string stdout_text = slurp(dir / "cli.out");
    CHECK(stdout_text.find("model kk2d: 44 x 44 cells") != std::string::npos);
    CHECK(stdout_text.find("lambda 0.07142857142857142") !=
          std::string::npos);
    CHECK(stdout_text.find("ok\n") != std::string::npos);

    // 44 * 44 cells plus the header line.
    CHECK(line_count(slurp(dir / "out" / "snapshot_t0.1.csv")) == 1937);
    fs::remove_all(dir);
}

TEST_CASE("run: repeated invocations are byte-identical") {
    const fs::path dir = fresh_dir("determinism");
    write_text(dir / "config.yaml", kSmallKk1d);
    const std::string config = "'" + (dir / "config.yaml").string() + "'";

    const int first =
        run_cli("run --config " + config + " --out '" +
                    (dir / "a").string() + "'",
                dir, "first");
    const int second =
        run_cli("run --config " + config + " --out '" +
                    (dir / "b").string() + "'",
                dir, "second");
    CHECK(first == 0);
    CHECK(second == 0);

    CHECK(slurp(dir / "first.out") == slurp(dir / "second.out"));
    CHECK(slurp(dir / "a" / "diagnostics.csv") ==
          slurp(dir / "b" / "diagnostics.csv"));
    CHECK(slurp(dir / "a" / "meta.txt") == slurp(dir / "b" / "meta.txt"));
    fs::remove_all(dir);
}

TEST_CASE("converge: a linear model meets its rate floor") {
    const fs::path dir = fresh_dir("converge");
    write_text(dir / "config.yaml", R"(model:
  id: linadv
grid:
  x_left: 0.0
  x_right: 3.2
  n_cells: 64
time:
  t_end: 0.5
converge:
  levels: 3
)");
    const int code =
        run_cli("converge --config '" + (dir / "config.yaml").string() +
                    "' --out '" + (dir / "out").string() + "'",
                dir);
    CHECK(code == 0);

    const std::string stdout_text = slurp(dir / "cli.out");
    CHECK(stdout_text.find("rate floor met") != std::string::npos);
    CHECK(slurp(dir / "cli.err").find("level 0: 64 cells") !=
          std::string::npos);

    // Three runs make two adjacent-pair rows, plus the header line.
    CHECK(line_count(slurp(dir / "out" / "convergence.csv")) == 3);
    CHECK(fs::exists(dir / "out" / "convergence_loglog.dat"));

    // Too few levels for a rate estimate is a configuration error.
    const int short_code =
        run_cli("converge --config '" + (dir / "config.yaml").string() +
                    "' --out '" + (dir / "short").string() + "' --levels 2",
                dir, "short");
    CHECK(short_code == 3);
    fs::remove_all(dir);
}

TEST_CASE("entropy-check: clean scheme passes, injected defect fails") {
    const fs::path dir = fresh_dir("entropy");
    write_text(dir / "config.yaml", kSmallKk1d);
    const std::string config = "'" + (dir / "config.yaml").string() + "'";

    const int clean =
        run_cli("entropy-check --config " + config + " --alphas 11 --out '" +
                    (dir / "clean").string() + "'",
                dir, "clean");
    CHECK(clean == 0);
    CHECK(slurp(dir / "clean.out").find("within tolerance") !=
          std::string::npos);
    CHECK(line_count(slurp(dir / "clean" / "entropy.csv")) == 12);

    const int dirty =
        run_cli("entropy-check --config " + config +
                    " --alphas 5 --debug-antidiffusion --out '" +
                    (dir / "dirty").string() + "'",
                dir, "dirty");
    CHECK(dirty == 2);
    CHECK(slurp(dir / "dirty.err").find("exceeds tolerance") !=
          std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("exit codes: configuration problems map to 3") {
    const fs::path dir = fresh_dir("codes3");

    CHECK(run_cli("run --preset paper-3d --out '" + (dir / "a").string() +
                      "'",
                  dir, "preset") == 3);
    CHECK(slurp(dir / "preset.err").find("unknown preset") !=
          std::string::npos);

    // No subcommand, no source, or two sources.
    CHECK(run_cli("", dir, "none") == 3);
    CHECK(run_cli("run --out '" + (dir / "b").string() + "'", dir,
                  "nosource") == 3);
    write_text(dir / "config.yaml", kSmallKk1d);
    CHECK(run_cli("run --config '" + (dir / "config.yaml").string() +
                      "' --preset paper-1d --out '" + (dir / "c").string() +
                      "'",
                  dir, "both") == 3);
    CHECK(slurp(dir / "both.err").find("exactly one of") != std::string::npos);

    // Scheme parameter outside the monotonicity window.
    write_text(dir / "theta.yaml", kSmallKk1d + "scheme:\n  theta: 0.7\n");
    CHECK(run_cli("run --config '" + (dir / "theta.yaml").string() +
                      "' --out '" + (dir / "d").string() + "'",
                  dir, "theta") == 3);

    // Help is not an error.
    CHECK(run_cli("--help", dir, "help") == 0);
    const std::string help = slurp(dir / "help.out");
    CHECK(help.find("run") != std::string::npos);
    CHECK(help.find("converge") != std::string::npos);
    CHECK(help.find("entropy-check") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("exit codes: support reaching the boundary maps to 4") {
    const fs::path dir = fresh_dir("codes4");
    write_text(dir / "config.yaml", R"(model:
  id: linadv
grid:
  x_left: 0.0
  x_right: 2.5
  n_cells: 200
time:
  t_end: 0.6
)");
    const int code =
        run_cli("run --config '" + (dir / "config.yaml").string() +
                    "' --out '" + (dir / "out").string() + "'",
                dir);
    CHECK(code == 4);
    CHECK(slurp(dir / "cli.err").find("error:") != std::string::npos);
    fs::remove_all(dir);
}
