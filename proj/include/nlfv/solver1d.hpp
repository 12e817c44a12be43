#ifndef NLFV_SOLVER1D_HPP
#define NLFV_SOLVER1D_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nlfv/flux.hpp"
#include "nlfv/grid.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/model.hpp"

namespace nlfv {

// Cell averages of all components plus the frozen coefficient samples.
// u[k][i] is the unweighted value, sigma[k][i] = sigma^k(x_i); the weighted
// state used by the flux is their product.
struct SystemState {
    Grid1D grid{0.0, 1.0, 1};
    int n_components = 0;
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> sigma;
    double t = 0.0;
    long step_index = 0;

    double ubar(int k, long i) const { return sigma[k][i] * u[k][i]; }
};

// Growth and increment constants of the stability estimates, evaluated for
// the state actually computed. k1 bounds adjacent-interface convolution
// increments (per dx), k2 centered second differences (per dx^2), k3 the
// exponential rate of the weighted sup norm, k4/k5 the homogeneous rate and
// the inhomogeneous production of the weighted total variation, and k6 is
// the observed L1 continuity-in-time quotient (reported, never asserted).
struct DiagnosticBounds {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double k4 = 0.0;
    double k5 = 0.0;
    double k6 = 0.0;
};

// Per-step record the monitors evaluate. Norms are of the weighted state
// except l1, which is the plain L1 norm dx * sum |u| per component (the
// conserved quantity). The *_excess fields hold the largest violation of the
// convolution increment bounds when their check is enabled (else -inf).
struct StepDiagnostics {
    double t = 0.0;
    double dt = 0.0;
    double min_value = 0.0;
    std::vector<double> l1;
    std::vector<double> linf_ubar;
    std::vector<double> tv_ubar;
    double time_increment_l1 = 0.0;
    double conv_first_excess = -std::numeric_limits<double>::infinity();
    double conv_second_excess = -std::numeric_limits<double>::infinity();
    double entropy_residual_max = -std::numeric_limits<double>::infinity();
};

// Project the initial data of a model onto a grid by exact cell averages
// (quadrature fallback when no average closure exists) and sample the
// coefficients at cell centers.
SystemState project_initial_data(const ModelSpec& model, const Grid1D& grid);

// Advance one explicit step of size dt in place and return its diagnostics.
// When out_conv is non-null the convolution field used by the step is stored
// there (entropy audits re-use it). Throws NonFiniteState when a non-finite
// value appears.
StepDiagnostics step(SystemState& state, const ModelSpec& model,
                     const SchemeConfig& scheme, const WeightsMatrix& weights,
                     double dt, ConvolutionField* out_conv = nullptr);

// Largest entropy residual over cells and components for threshold alpha:
//   |u' - kap| - |u - kap| + lambda (G_r - G_l)
//     + lambda sgn(u' - kap) f(alpha) (a_r - a_l)
// with kap = alpha / sigma_i and G the entropy flux. prev/next are the
// states before and after one step computed with the given field.
double entropy_residual(const SystemState& prev, const SystemState& next,
                        const ModelSpec& model, const SchemeConfig& scheme,
                        const ConvolutionField& field, double dt,
                        double alpha);

struct RunOptions {
    bool check_support = true;
    bool check_conv_differences = false;
    std::vector<double> entropy_alphas;
    std::vector<double> snapshot_times;
    std::function<void(const SystemState&)> on_snapshot;
};

struct RunResult {
    SystemState state;
    std::vector<StepDiagnostics> series;  // entry 0 describes the initial state
    double lambda = 0.0;
    double dt = 0.0;
    long n_steps = 0;
    DiagnosticBounds bounds;
    // Largest residual per requested entropy threshold, aligned with
    // options.entropy_alphas.
    std::vector<double> entropy_max_per_alpha;
};

// March from t = 0 to t_end with dt = cfl_safety * max_stable_lambda * dx,
// landing exactly on every snapshot time and on t_end by shortening the
// closing step of each span. check_support enforces the open-space model in
// two stages: the initial data must vanish (below 1e-13 * max(1, sup))
// within one kernel reach of either boundary, and during the run the
// boundary cells must stay below 1e-3 * max(1, sup), which tolerates the
// exponentially small numerical-diffusion halo while still catching genuine
// support arrival. Throws SupportClipped otherwise.
RunResult run(const ModelSpec& model, const Grid1D& grid,
              const SchemeConfig& scheme, double t_end,
              const RunOptions& options = {});

struct MonitorFinding {
    std::string item;
    long step = 0;
    double margin = 0.0;
    std::string detail;
};

// Outcome of auditing a completed run against every stability estimate:
// positivity, exact mass conservation, the exponential sup-norm bound, the
// exponential-affine variation bound, the convolution increment bounds (when
// recorded), and the entropy residuals (when recorded). The exponential
// bounds are compared in the log domain so large rate constants cannot
// overflow.
struct MonitorReport {
    bool passed = true;
    std::vector<MonitorFinding> findings;
    DiagnosticBounds bounds;
    double min_value = 0.0;
    double mass_drift_rel = 0.0;
    double sup_log_margin = -std::numeric_limits<double>::infinity();
    double tv_log_margin = -std::numeric_limits<double>::infinity();
    double entropy_residual_max = -std::numeric_limits<double>::infinity();
    double conv_first_excess = -std::numeric_limits<double>::infinity();
    double conv_second_excess = -std::numeric_limits<double>::infinity();
};

MonitorReport check_stability_monitors(const ModelSpec& model,
                                       const RunResult& result);

// Throw MonitorViolation for the worst finding of a failed report.
void require_monitors(const MonitorReport& report);

}  // namespace nlfv

#endif
