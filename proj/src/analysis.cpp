#include "nlfv/analysis.hpp"

#include <cmath>
#include <string>

namespace nlfv {

namespace {

long refinement_factor(long coarse_cells, long fine_cells) {
    if (coarse_cells <= 0 || fine_cells <= 0 || fine_cells % coarse_cells != 0)
        throw GridMismatch("cell counts " + std::to_string(coarse_cells) +
                           " and " + std::to_string(fine_cells) +
                           " do not nest");
    const long factor = fine_cells / coarse_cells;
    long f = factor;
    while (f > 1) {
        if (f % 2 != 0)
            throw GridMismatch("refinement factor " + std::to_string(factor) +
                               " is not a power of two");
        f /= 2;
    }
    return factor;
}

void require_same_bounds(double a_lo, double a_hi, double b_lo, double b_hi) {
    if (a_lo != b_lo || a_hi != b_hi)
        throw GridMismatch("grids cover different intervals");
}

ConvergenceTable finish_table(std::vector<ConvergenceRow> rows,
                              const ModelSpec& model, double rate_margin) {
    ConvergenceTable table;
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        rows[i].rate = std::log2(rows[i].error / rows[i + 1].error);
    table.rows = std::move(rows);
    table.rate_floor = rate_floor_for(model);
    table.rate_margin = rate_margin;
    if (table.rows.size() >= 2) {
        table.finest_rate = table.rows[table.rows.size() - 2].rate;
        table.meets_floor =
            table.finest_rate >= table.rate_floor - rate_margin;
    }
    return table;
}

}  // namespace

double l1_distance_refined(const SystemState& coarse,
                           const SystemState& fine) {
    require_same_bounds(coarse.grid.x_left, coarse.grid.x_right,
                        fine.grid.x_left, fine.grid.x_right);
    const long factor = refinement_factor(coarse.grid.n_cells,
                                          fine.grid.n_cells);
    if (coarse.n_components != fine.n_components)
        throw GridMismatch("component counts differ");

    const double dx_fine = fine.grid.dx();
    long double sum = 0.0L;
    for (int k = 0; k < coarse.n_components; ++k) {
        const auto& uc = coarse.u[static_cast<size_t>(k)];
        const auto& uf = fine.u[static_cast<size_t>(k)];
        for (long i = 0; i < fine.grid.n_cells; ++i) {
            const double diff = uf[static_cast<size_t>(i)] -
                                uc[static_cast<size_t>(i / factor)];
            sum += std::abs(static_cast<long double>(diff));
        }
    }
    return static_cast<double>(sum) * dx_fine;
}

double l1_distance_refined_2d(const SystemState2D& coarse,
                              const SystemState2D& fine) {
    require_same_bounds(coarse.grid.x_left, coarse.grid.x_right,
                        fine.grid.x_left, fine.grid.x_right);
    require_same_bounds(coarse.grid.y_left, coarse.grid.y_right,
                        fine.grid.y_left, fine.grid.y_right);
    const long factor = refinement_factor(coarse.grid.nx, fine.grid.nx);
    if (refinement_factor(coarse.grid.ny, fine.grid.ny) != factor)
        throw GridMismatch("x and y refinement factors differ");
    if (coarse.n_components != fine.n_components)
        throw GridMismatch("component counts differ");

    const double cell = fine.grid.dx() * fine.grid.dx();
    long double sum = 0.0L;
    for (int k = 0; k < coarse.n_components; ++k) {
        const auto& uc = coarse.u[static_cast<size_t>(k)];
        const auto& uf = fine.u[static_cast<size_t>(k)];
        for (long jy = 0; jy < fine.grid.ny; ++jy) {
            const long cj = jy / factor;
            for (long ix = 0; ix < fine.grid.nx; ++ix) {
                const double diff =
                    uf[static_cast<size_t>(jy * fine.grid.nx + ix)] -
                    uc[static_cast<size_t>(cj * coarse.grid.nx +
                                           ix / factor)];
                sum += std::abs(static_cast<long double>(diff));
            }
        }
    }
    return static_cast<double>(sum) * cell;
}

double rate_floor_for(const ModelSpec& model) {
    for (const Component& comp : model.comp)
        if (comp.sigma.tv > 0.0) return 1.0 / 3.0;
    return 0.5;
}

ConvergenceTable convergence_study(const ModelSpec& model,
                                   const Grid1D& base_grid,
                                   const SchemeConfig& scheme, double t_end,
                                   const ConvergenceOptions& options) {
    if (options.levels < 3)
        throw ConfigError(
            "a convergence study needs at least 3 levels; got " +
            std::to_string(options.levels));

    // The stable time step ratio depends only on the model constants and
    // theta, so every level marches with the same lambda.
    std::vector<SystemState> states;
    std::vector<ConvergenceRow> rows;
    for (int level = 0; level < options.levels; ++level) {
        const long n_cells = base_grid.n_cells << level;
        if (options.on_level_start) options.on_level_start(level, n_cells);
        Grid1D grid{base_grid.x_left, base_grid.x_right, n_cells};
        RunOptions run_options;
        RunResult result = run(model, grid, scheme, t_end, run_options);
        require_monitors(check_stability_monitors(model, result));
        states.push_back(std::move(result.state));
        if (level > 0) {
            ConvergenceRow row;
            row.n_cells = base_grid.n_cells << (level - 1);
            row.dx = (base_grid.x_right - base_grid.x_left) /
                     static_cast<double>(row.n_cells);
            row.error = l1_distance_refined(states[static_cast<size_t>(
                                                level - 1)],
                                            states[static_cast<size_t>(level)]);
            rows.push_back(row);
        }
    }
    return finish_table(std::move(rows), model, options.rate_margin);
}

ConvergenceTable convergence_study_2d(const ModelSpec& model,
                                      const Grid2D& base_grid,
                                      const SchemeConfig& scheme, double t_end,
                                      const ConvergenceOptions& options) {
    if (options.levels < 3)
        throw ConfigError(
            "a convergence study needs at least 3 levels; got " +
            std::to_string(options.levels));

    std::vector<SystemState2D> states;
    std::vector<ConvergenceRow> rows;
    for (int level = 0; level < options.levels; ++level) {
        const long nx = base_grid.nx << level;
        const long ny = base_grid.ny << level;
        if (options.on_level_start) options.on_level_start(level, nx);
        Grid2D grid{base_grid.x_left, base_grid.x_right, base_grid.y_left,
                    base_grid.y_right, nx, ny};
        RunOptions2D run_options;
        RunResult2D result = run_2d(model, grid, scheme, t_end, run_options);
        require_monitors(check_stability_monitors_2d(model, result));
        states.push_back(std::move(result.state));
        if (level > 0) {
            ConvergenceRow row;
            row.n_cells = base_grid.nx << (level - 1);
            row.dx = (base_grid.x_right - base_grid.x_left) /
                     static_cast<double>(row.n_cells);
            row.error = l1_distance_refined_2d(
                states[static_cast<size_t>(level - 1)],
                states[static_cast<size_t>(level)]);
            rows.push_back(row);
        }
    }
    return finish_table(std::move(rows), model, options.rate_margin);
}

ConvergenceTable rate_against_exact(const ModelSpec& model,
                                    const std::vector<long>& n_cells_list,
                                    double x_left, double x_right,
                                    const SchemeConfig& scheme, double t_end) {
    if (!model.exact_average)
        throw NoExactSolution("model " + model.id +
                              " has no closed-form solution");
    if (n_cells_list.size() < 2)
        throw ConfigError("rate_against_exact needs at least 2 resolutions");

    std::vector<ConvergenceRow> rows;
    for (long n_cells : n_cells_list) {
        Grid1D grid{x_left, x_right, n_cells};
        RunOptions run_options;
        RunResult result = run(model, grid, scheme, t_end, run_options);
        const double dx = grid.dx();

        long double sum = 0.0L;
        for (int k = 0; k < model.n_components; ++k) {
            const auto& u = result.state.u[static_cast<size_t>(k)];
            for (long i = 0; i < n_cells; ++i) {
                const double a = grid.interface(i);
                const double exact = model.exact_average(k, a, a + dx, t_end);
                sum += std::abs(
                    static_cast<long double>(u[static_cast<size_t>(i)] -
                                             exact));
            }
        }
        ConvergenceRow row;
        row.n_cells = n_cells;
        row.dx = dx;
        row.error = static_cast<double>(sum) * dx;
        rows.push_back(row);
    }

    ConvergenceTable table;
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        rows[i].rate = std::log(rows[i].error / rows[i + 1].error) /
                       std::log(rows[i].dx / rows[i + 1].dx);
    }
    table.rows = std::move(rows);
    table.rate_floor = rate_floor_for(model);
    table.rate_margin = 0.05;
    if (table.rows.size() >= 2) {
        table.finest_rate = table.rows[table.rows.size() - 2].rate;
        table.meets_floor =
            table.finest_rate >= table.rate_floor - table.rate_margin;
    }
    return table;
}

}  // namespace nlfv
