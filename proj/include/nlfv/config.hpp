#ifndef NLFV_CONFIG_HPP
#define NLFV_CONFIG_HPP

#include <string>
#include <vector>

#include "nlfv/flux.hpp"
#include "nlfv/model.hpp"

namespace nlfv {

// Parsed experiment configuration. The on-disk format is YAML with sections
// model / grid / scheme / time / monitors / converge / entropy; the README
// documents the full schema. Validation reports the file position of the
// offending node.
struct RunConfig {
    std::string model_id;

    double x_left = 0.0;
    double x_right = 1.0;
    long n_cells = 0;
    double y_left = 0.0;
    double y_right = 1.0;
    long ny = 0;

    SchemeConfig scheme;

    double t_end = 0.0;
    std::vector<double> snapshot_times;

    bool monitor_stability = true;
    bool monitor_conv_differences = false;

    int converge_levels = 4;

    int entropy_alphas = 21;
    double entropy_tolerance = 1e-12;

    unsigned long seed = 0;  // reserved for randomized harnesses
};

RunConfig parse_config(const std::string& text, const std::string& source_name);
RunConfig load_config_file(const std::string& path);

// Bundled reference experiment configurations: "paper-1d" (the staircase
// two-component 1D system) and "paper-2d" (the disk-kernel 2D system), each
// pinning every constant of the corresponding published experiment. Throws
// ConfigError on an unknown name.
RunConfig preset_config(const std::string& name);
const std::string& preset_text(const std::string& name);

// Cross-checks between a config and its resolved model: positive resolution,
// theta inside (0, 2 / (3 sup sigma)), cfl_safety in (0, 1], kernels
// resolvable on the grid spacing, snapshot times inside [0, t_end].
// Throws ConfigError / InsufficientResolution / DegenerateModel.
void validate_config(const RunConfig& config, const ModelSpec& model);

}  // namespace nlfv

#endif
