// Command line front end: march a configuration, run a refinement study, or
// audit the entropy residuals of a computed solution.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nlfv/analysis.hpp"
#include "nlfv/config.hpp"
#include "nlfv/io.hpp"
#include "nlfv/model.hpp"
#include "nlfv/solver1d.hpp"
#include "nlfv/solver2d.hpp"

namespace fs = std::filesystem;
using namespace nlfv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitMonitor = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRunaway = 4;

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out = "out";
};

void add_common(CLI::App* cmd, CommonArgs* args) {
    cmd->add_option("-c,--config", args->config_path,
                    "YAML configuration file");
    cmd->add_option("-p,--preset", args->preset,
                    "bundled configuration (paper-1d, paper-2d)");
    cmd->add_option("-o,--out", args->out, "output directory");
}

RunConfig resolve_config(const CommonArgs& args) {
    const bool have_file = !args.config_path.empty();
    const bool have_preset = !args.preset.empty();
    if (have_file == have_preset) {
        throw ConfigError(
            "exactly one of --config and --preset must be given");
    }
    return have_file ? load_config_file(args.config_path)
                     : preset_config(args.preset);
}

std::string time_label(double t) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", t);
    return buffer;
}

std::string rate_cell(double rate) {
    if (std::isnan(rate)) return "-";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", rate);
    return buffer;
}

void write_run_meta(const fs::path& path, const ModelSpec& model, double dx,
                    double lambda, const SchemeConfig& scheme, double t_end) {
    write_meta(path, {
                         {"model", model.id},
                         {"dx", format_double(dx)},
                         {"lambda", format_double(lambda)},
                         {"theta", format_double(scheme.theta)},
                         {"flux", to_string(scheme.family)},
                         {"t_end", format_double(t_end)},
                     });
}

int run_command(const CommonArgs& args) {
    const RunConfig config = resolve_config(args);
    const ModelSpec model = builtin_model(config.model_id);
    validate_config(config, model);
    const fs::path out(args.out);
    fs::create_directories(out);

    if (model.dimension == 1) {
        Grid1D grid{config.x_left, config.x_right, config.n_cells};
        RunOptions options;
        options.check_conv_differences = config.monitor_conv_differences;
        options.snapshot_times = config.snapshot_times;
        options.on_snapshot = [&](const SystemState& state) {
            write_state_csv(
                out / ("snapshot_t" + time_label(state.t) + ".csv"), state);
        };
        const RunResult result =
            run(model, grid, config.scheme, config.t_end, options);
        write_diagnostics_csv(out / "diagnostics.csv", result);
        write_run_meta(out / "meta.txt", model, grid.dx(), result.lambda,
                       config.scheme, config.t_end);

        std::printf("model %s: %ld cells, dx %s, lambda %s, %ld steps\n",
                    model.id.c_str(), grid.n_cells,
                    format_double(grid.dx()).c_str(),
                    format_double(result.lambda).c_str(), result.n_steps);
        const MonitorReport report = check_stability_monitors(model, result);
        std::printf("monitor positivity: min value %s\n",
                    format_double(report.min_value).c_str());
        std::printf("monitor mass-conservation: relative drift %s\n",
                    format_double(report.mass_drift_rel).c_str());
        std::printf("monitor sup-bound: log margin %s (rate %s)\n",
                    format_double(report.sup_log_margin).c_str(),
                    format_double(report.bounds.k3).c_str());
        std::printf("monitor variation-bound: log margin %s\n",
                    format_double(report.tv_log_margin).c_str());
        if (config.monitor_conv_differences) {
            std::printf("monitor convolution-increment: excess %s\n",
                        format_double(report.conv_first_excess).c_str());
            std::printf("monitor convolution-curvature: excess %s\n",
                        format_double(report.conv_second_excess).c_str());
        }
        std::printf("time continuity quotient k6: %s (reported only)\n",
                    format_double(report.bounds.k6).c_str());
        if (config.monitor_stability) require_monitors(report);
    } else {
        Grid2D grid{config.x_left, config.x_right, config.y_left,
                    config.y_right, config.n_cells, config.ny};
        RunOptions2D options;
        options.snapshot_times = config.snapshot_times;
        options.on_snapshot = [&](const SystemState2D& state) {
            write_state_csv_2d(
                out / ("snapshot_t" + time_label(state.t) + ".csv"), state);
        };
        const RunResult2D result =
            run_2d(model, grid, config.scheme, config.t_end, options);
        write_diagnostics_csv_2d(out / "diagnostics.csv", result);
        write_run_meta(out / "meta.txt", model, grid.dx(), result.lambda,
                       config.scheme, config.t_end);

        std::printf("model %s: %ld x %ld cells, dx %s, lambda %s, %ld steps\n",
                    model.id.c_str(), grid.nx, grid.ny,
                    format_double(grid.dx()).c_str(),
                    format_double(result.lambda).c_str(), result.n_steps);
        const MonitorReport report =
            check_stability_monitors_2d(model, result);
        std::printf("monitor positivity: min value %s\n",
                    format_double(report.min_value).c_str());
        std::printf("monitor mass-conservation: relative drift %s\n",
                    format_double(report.mass_drift_rel).c_str());
        std::printf("monitor sup-bound: log margin %s (rate %s)\n",
                    format_double(report.sup_log_margin).c_str(),
                    format_double(report.bounds.k3).c_str());
        if (config.monitor_stability) require_monitors(report);
    }
    std::printf("ok\n");
    return kExitOk;
}

int converge_command(const CommonArgs& args, int levels_override) {
    const RunConfig config = resolve_config(args);
    const ModelSpec model = builtin_model(config.model_id);
    validate_config(config, model);
    const fs::path out(args.out);
    fs::create_directories(out);

    ConvergenceOptions options;
    options.levels =
        levels_override > 0 ? levels_override : config.converge_levels;
    options.on_level_start = [](int level, long n_cells) {
        std::fprintf(stderr, "level %d: %ld cells\n", level, n_cells);
    };

    ConvergenceTable table;
    if (model.dimension == 1) {
        Grid1D base{config.x_left, config.x_right, config.n_cells};
        table = convergence_study(model, base, config.scheme, config.t_end,
                                  options);
    } else {
        Grid2D base{config.x_left, config.x_right, config.y_left,
                    config.y_right, config.n_cells, config.ny};
        table = convergence_study_2d(model, base, config.scheme,
                                     config.t_end, options);
    }

    write_convergence_csv(out / "convergence.csv", table);
    write_loglog_data(out / "convergence_loglog.dat", table);

    std::printf("%10s %14s %14s %8s\n", "n_cells", "dx", "e", "alpha");
    for (const ConvergenceRow& row : table.rows) {
        std::printf("%10ld %14.8g %14.6e %8s\n", row.n_cells, row.dx,
                    row.error, rate_cell(row.rate).c_str());
    }
    std::printf("rate floor %.4f, margin %.2f, finest rate %.4f\n",
                table.rate_floor, table.rate_margin, table.finest_rate);
    if (!table.meets_floor) {
        std::fprintf(stderr,
                     "convergence: finest rate %.4f below the proven floor "
                     "%.4f (margin %.2f)\n",
                     table.finest_rate, table.rate_floor, table.rate_margin);
        return kExitMonitor;
    }
    std::printf("rate floor met\n");
    return kExitOk;
}

int entropy_command(const CommonArgs& args, int alphas_override,
                    bool inject_defect) {
    const RunConfig config = resolve_config(args);
    const ModelSpec model = builtin_model(config.model_id);
    validate_config(config, model);
    if (model.dimension != 1)
        throw ConfigError("the entropy audit is defined for 1D models");
    const fs::path out(args.out);
    fs::create_directories(out);

    const int n_alphas =
        alphas_override > 0 ? alphas_override : config.entropy_alphas;
    if (n_alphas <= 0)
        throw ConfigError("the entropy audit needs at least one threshold");

    Grid1D grid{config.x_left, config.x_right, config.n_cells};
    const SystemState initial = project_initial_data(model, grid);
    double hi = 0.0;
    for (int k = 0; k < initial.n_components; ++k)
        for (long i = 0; i < grid.n_cells; ++i)
            hi = std::max(hi, std::abs(initial.ubar(k, i)));
    hi *= 1.2;

    RunOptions options;
    options.entropy_alphas.reserve(static_cast<size_t>(n_alphas));
    for (int j = 0; j < n_alphas; ++j) {
        options.entropy_alphas.push_back(
            n_alphas == 1 ? 0.0
                          : hi * static_cast<double>(j) /
                                static_cast<double>(n_alphas - 1));
    }

    SchemeConfig scheme = config.scheme;
    scheme.debug_antidiffusion = inject_defect;

    const RunResult result = run(model, grid, scheme, config.t_end, options);

    std::vector<std::pair<double, double>> rows;
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < options.entropy_alphas.size(); ++j) {
        rows.emplace_back(options.entropy_alphas[j],
                          result.entropy_max_per_alpha[j]);
        worst = std::max(worst, result.entropy_max_per_alpha[j]);
    }
    write_entropy_csv(out / "entropy.csv", rows);

    std::printf("entropy audit: %d thresholds on [0, %s], max residual %s\n",
                n_alphas, format_double(hi).c_str(),
                format_double(worst).c_str());
    if (worst > config.entropy_tolerance) {
        std::fprintf(stderr,
                     "entropy: max residual %s exceeds tolerance %s\n",
                     format_double(worst).c_str(),
                     format_double(config.entropy_tolerance).c_str());
        return kExitMonitor;
    }
    std::printf("within tolerance %s\n",
                format_double(config.entropy_tolerance).c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "finite-volume solver for coupled nonlocal conservation laws with "
        "discontinuous coefficients"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* cmd_run =
        app.add_subcommand("run", "march one configuration and write "
                                  "snapshots, diagnostics, and metadata");
    add_common(cmd_run, &run_args);

    CommonArgs conv_args;
    int levels_override = 0;
    CLI::App* cmd_conv = app.add_subcommand(
        "converge", "self-refinement study with rate-floor check");
    add_common(cmd_conv, &conv_args);
    cmd_conv->add_option("--levels", levels_override,
                         "number of refinement levels (overrides the config)");

    CommonArgs ent_args;
    int alphas_override = 0;
    bool inject_defect = false;
    CLI::App* cmd_ent = app.add_subcommand(
        "entropy-check", "discrete entropy-inequality audit over a "
                         "threshold grid");
    add_common(cmd_ent, &ent_args);
    cmd_ent->add_option("--alphas", alphas_override,
                        "number of thresholds (overrides the config)");
    cmd_ent->add_flag("--debug-antidiffusion", inject_defect,
                      "flip the sign of the diffusion term (testing hook; "
                      "the audit is expected to fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (cmd_run->parsed()) return run_command(run_args);
        if (cmd_conv->parsed())
            return converge_command(conv_args, levels_override);
        if (cmd_ent->parsed())
            return entropy_command(ent_args, alphas_override, inject_defect);
        std::fprintf(stderr, "error: no subcommand given\n");
        return kExitConfig;
    } catch (const MonitorViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMonitor;
    } catch (const NonFiniteState& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRunaway;
    } catch (const SupportClipped& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRunaway;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const DegenerateModel& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const UnsupportedFlux& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const InsufficientResolution& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitUnexpected;
    }
}
