#ifndef NLFV_ANALYSIS_HPP
#define NLFV_ANALYSIS_HPP

#include <functional>
#include <limits>
#include <vector>

#include "nlfv/solver1d.hpp"
#include "nlfv/solver2d.hpp"

namespace nlfv {

// L1 distance between solutions on a coarse grid and on its exact 2^m : 1
// refinement (same bounds). Each coarse cell value is replicated onto its
// children and the distance is summed in the fine resolution over all
// components. Throws GridMismatch when the grids do not nest.
double l1_distance_refined(const SystemState& coarse, const SystemState& fine);
double l1_distance_refined_2d(const SystemState2D& coarse,
                              const SystemState2D& fine);

// One refinement level of a study. error pairs this resolution with the next
// finer one; rate = log2(error / next error) sits on the coarser row of each
// pair, so the finest tabulated row carries rate = nan.
struct ConvergenceRow {
    long n_cells = 0;
    double dx = 0.0;
    double error = 0.0;
    double rate = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double finest_rate = std::numeric_limits<double>::quiet_NaN();
    double rate_floor = 0.0;
    double rate_margin = 0.0;
    bool meets_floor = false;
};

struct ConvergenceOptions {
    int levels = 4;  // number of solver runs; the table then has levels-1 rows
    double rate_margin = 0.05;
    std::function<void(int level, long n_cells)> on_level_start;
};

// Proven lower bound on the convergence rate: 1/2 when every coefficient has
// zero variation, 1/3 otherwise.
double rate_floor_for(const ModelSpec& model);

// Self-refinement study: run at dx = base/2^l for l = 0..levels-1 with the
// time step ratio lambda fixed across levels, compare adjacent pairs, and
// check the finest computed rate against the proven floor plus margin.
// Requires levels >= 3 (two errors make one rate); throws ConfigError below
// that.
ConvergenceTable convergence_study(const ModelSpec& model,
                                   const Grid1D& base_grid,
                                   const SchemeConfig& scheme, double t_end,
                                   const ConvergenceOptions& options);

ConvergenceTable convergence_study_2d(const ModelSpec& model,
                                      const Grid2D& base_grid,
                                      const SchemeConfig& scheme, double t_end,
                                      const ConvergenceOptions& options);

// Errors against the projected exact solution at the listed resolutions
// (not necessarily halving; rates use log(e1/e2)/log(dx1/dx2), attached to
// the coarser row). Throws NoExactSolution when the model has no closed
// form.
ConvergenceTable rate_against_exact(const ModelSpec& model,
                                    const std::vector<long>& n_cells_list,
                                    double x_left, double x_right,
                                    const SchemeConfig& scheme, double t_end);

}  // namespace nlfv

#endif
