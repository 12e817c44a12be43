#include "nlfv/config.hpp"

namespace nlfv {

namespace {

// Reference 1D experiment: two-component staircase system on [0, 4], 640
// cells, diffusion parameter theta = 1/3, horizon T = 0.3, five-level
// refinement study.
const std::string kPaper1d = R"(model:
  id: kk1d
grid:
  x_left: 0.0
  x_right: 4.0
  n_cells: 640
scheme:
  flux: lax_friedrichs
  theta: 0.33333333333333331
  cfl_safety: 1.0
  quadrature: mean
time:
  t_end: 0.3
  snapshots: [0.0, 0.15, 0.3]
monitors:
  stability: true
  conv_differences: true
converge:
  levels: 5
entropy:
  alphas: 21
  tolerance: 1.0e-12
seed: 0
)";

// Reference 2D experiment: two-component disk-kernel system on the square
// [-1.1, 1.1]^2, 44 x 44 base grid, horizon T = 0.1, five-level study.
const std::string kPaper2d = R"(model:
  id: kk2d
grid:
  x_left: -1.1
  x_right: 1.1
  n_cells: 44
  y_left: -1.1
  y_right: 1.1
  ny: 44
scheme:
  flux: lax_friedrichs
  theta: 0.33333333333333331
  cfl_safety: 1.0
  quadrature: left
time:
  t_end: 0.1
  snapshots: [0.0, 0.1]
monitors:
  stability: true
converge:
  levels: 5
entropy:
  alphas: 21
  tolerance: 1.0e-12
seed: 0
)";

}  // namespace

const std::string& preset_text(const std::string& name) {
    if (name == "paper-1d") return kPaper1d;
    if (name == "paper-2d") return kPaper2d;
    throw ConfigError("unknown preset '" + name +
                      "' (available: paper-1d, paper-2d)");
}

RunConfig preset_config(const std::string& name) {
    return parse_config(preset_text(name), "preset:" + name);
}

}  // namespace nlfv
