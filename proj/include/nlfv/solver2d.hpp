#ifndef NLFV_SOLVER2D_HPP
#define NLFV_SOLVER2D_HPP

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "nlfv/flux.hpp"
#include "nlfv/grid.hpp"
#include "nlfv/model.hpp"
#include "nlfv/solver1d.hpp"

namespace nlfv {

// Row-major cell averages: u[k][jy * nx + ix]. The 2D scheme requires unit
// coefficients, so no sigma samples are stored.
struct SystemState2D {
    Grid2D grid{0.0, 1.0, 0.0, 1.0, 1, 1};
    int n_components = 0;
    std::vector<std::vector<double>> u;
    double t = 0.0;
    long step_index = 0;
};

// Kernel samples for the two interface families. The x-sweep evaluates the
// kernel at ((r + 1/2) dx, s dy) and pairs offset (r, s) with the cell
// (h - 1 - r, jy - s) for the vertical interface (h, jy); the y-sweep uses
// (r dx, (s + 1/2) dy) against (ix - r, g - 1 - s) for the horizontal
// interface (ix, g). Rows are trimmed to their nonzero span; row_w holds the
// weights of row s in ascending source-cell order (descending r).
struct KernelWeights2D {
    double dx = 0.0;

    struct Row {
        long r_lo = 0;
        long r_hi = 0;
        std::vector<double> w;  // w[t] = density value at r = r_hi - t
    };

    long sx_lo = 0;  // x-sweep row range, offset s
    std::vector<Row> xrows;
    double mass_x = 0.0;

    long sy_lo = 0;  // y-sweep row range, offset s
    std::vector<Row> yrows;
    double mass_y = 0.0;
};

// Sample a disk kernel on spacing dx. Requires dx <= radius / 2 so the
// footprint keeps at least a few rows; throws InsufficientResolution below
// that.
KernelWeights2D build_kernel_weights_2d(const Kernel2D& kernel, double dx);

using WeightsMatrix2D =
    std::vector<std::vector<std::shared_ptr<const KernelWeights2D>>>;

WeightsMatrix2D build_weights_matrix_2d(const ModelSpec& model, double dx);

// Convolution values at the vertical interfaces (cx, (nx+1) * ny per
// component pair) and horizontal interfaces (cy, nx * (ny+1)), sampled with
// the cell values themselves (left-type rule in both directions).
struct ConvolutionField2D {
    int n_components = 0;
    long nx = 0;
    long ny = 0;
    std::vector<std::vector<double>> cx;  // cx[k][(jy * (nx+1) + h) * n + j]
    std::vector<std::vector<double>> cy;  // cy[k][(g * nx + ix) * n + j]
};

ConvolutionField2D convolution_field_2d(
    const WeightsMatrix2D& weights,
    const std::vector<std::vector<double>>& u, long nx, long ny);

// How the per-step interface convolutions are evaluated. The direct strategy
// walks the sampled stencil; the spectral strategy computes the same sums
// through zero-padded Fourier transforms and agrees with the direct one to
// rounding. auto_select picks the cheaper estimate for the grid at hand.
enum class Conv2DStrategy { auto_select, direct, spectral };

// Reusable evaluator bound to one weights matrix and grid shape. Keeps the
// kernel spectra and scratch buffers alive across steps. The referenced
// weights matrix must outlive the engine. Not safe for concurrent use.
class Conv2DEngine {
  public:
    Conv2DEngine(const WeightsMatrix2D& weights, long nx, long ny,
                 Conv2DStrategy strategy = Conv2DStrategy::auto_select);
    ~Conv2DEngine();
    Conv2DEngine(Conv2DEngine&&) noexcept;
    Conv2DEngine& operator=(Conv2DEngine&&) noexcept;

    bool spectral() const;
    ConvolutionField2D field(const std::vector<std::vector<double>>& u) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SystemState2D project_initial_data_2d(const ModelSpec& model,
                                      const Grid2D& grid);

struct StepDiagnostics2D {
    double t = 0.0;
    double dt = 0.0;
    double min_value = 0.0;
    std::vector<double> l1;
    std::vector<double> linf;
};

// One unsplit five-point step: both directional flux differences are applied
// in a single update with the shared lambda = dt / dx.
StepDiagnostics2D step_2d(SystemState2D& state, const ModelSpec& model,
                          const SchemeConfig& scheme,
                          const WeightsMatrix2D& weights, double dt);

// Same step with the convolutions evaluated by a prebuilt engine.
StepDiagnostics2D step_2d(SystemState2D& state, const ModelSpec& model,
                          const SchemeConfig& scheme,
                          const Conv2DEngine& engine, double dt);

struct RunOptions2D {
    bool check_support = true;
    std::vector<double> snapshot_times;
    std::function<void(const SystemState2D&)> on_snapshot;
};

struct RunResult2D {
    SystemState2D state;
    std::vector<StepDiagnostics2D> series;
    double lambda = 0.0;
    double dt = 0.0;
    long n_steps = 0;
    double sup_growth_rate = 0.0;  // exponent of the sup-norm monitor
};

RunResult2D run_2d(const ModelSpec& model, const Grid2D& grid,
                   const SchemeConfig& scheme, double t_end,
                   const RunOptions2D& options = {});

// Positivity, exact mass conservation, and the exponential sup-norm bound
// (log domain) for a completed 2D run.
MonitorReport check_stability_monitors_2d(const ModelSpec& model,
                                          const RunResult2D& result);

}  // namespace nlfv

#endif
