#include "nlfv/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "nlfv/kernel.hpp"
#include "nlfv/solver1d.hpp"
#include "nlfv/solver2d.hpp"

namespace nlfv {

namespace {

[[noreturn]] void fail(const std::string& source, const YAML::Node& node,
                       const std::string& message) {
    std::string where = source;
    const YAML::Mark mark = node.Mark();
    if (mark.line >= 0) {
        where += ":" + std::to_string(mark.line + 1) + ":" +
                 std::to_string(mark.column + 1);
    }
    throw ConfigError(where + ": " + message);
}

void require_known_keys(const std::string& source, const YAML::Node& map,
                        const std::string& section,
                        const std::set<std::string>& allowed) {
    for (const auto& entry : map) {
        const std::string key = entry.first.as<std::string>();
        if (allowed.count(key) == 0) {
            fail(source, entry.first,
                 "unknown key '" + key + "' in section '" + section + "'");
        }
    }
}

YAML::Node section(const std::string& source, const YAML::Node& root,
                   const std::string& name, bool required) {
    const YAML::Node node = root[name];
    if (!node) {
        if (required)
            fail(source, root, "missing required section '" + name + "'");
        return node;
    }
    if (!node.IsMap())
        fail(source, node, "section '" + name + "' must be a mapping");
    return node;
}

template <typename T>
T value_as(const std::string& source, const YAML::Node& node,
           const std::string& name, const char* type_name) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(source, node, "'" + name + "' must be a " + type_name);
    }
}

template <typename T>
void read_scalar(const std::string& source, const YAML::Node& map,
                 const std::string& name, const char* type_name, T* out) {
    const YAML::Node node = map[name];
    if (!node) return;
    *out = value_as<T>(source, node, name, type_name);
}

template <typename T>
T require_scalar(const std::string& source, const YAML::Node& map,
                 const std::string& name, const char* type_name) {
    const YAML::Node node = map[name];
    if (!node) fail(source, map, "missing required key '" + name + "'");
    return value_as<T>(source, node, name, type_name);
}

RunConfig parse_loaded(const YAML::Node& root,
                       const std::string& source_name);

}  // namespace

RunConfig parse_config(const std::string& text,
                       const std::string& source_name) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& err) {
        throw ConfigError(source_name + ":" +
                          std::to_string(err.mark.line + 1) + ":" +
                          std::to_string(err.mark.column + 1) + ": " +
                          err.msg);
    }
    if (!root.IsMap())
        throw ConfigError(source_name + ": top level must be a mapping");

    try {
        return parse_loaded(root, source_name);
    } catch (const YAML::Exception& err) {
        throw ConfigError(source_name + ": " + err.msg);
    }
}

namespace {

RunConfig parse_loaded(const YAML::Node& root,
                       const std::string& source_name) {
    require_known_keys(source_name, root, "top level",
                       {"model", "grid", "scheme", "time", "monitors",
                        "converge", "entropy", "seed"});

    RunConfig config;

    {
        const YAML::Node node = section(source_name, root, "model", true);
        require_known_keys(source_name, node, "model", {"id"});
        config.model_id =
            require_scalar<std::string>(source_name, node, "id", "string");
    }

    {
        const YAML::Node node = section(source_name, root, "grid", true);
        require_known_keys(
            source_name, node, "grid",
            {"x_left", "x_right", "n_cells", "y_left", "y_right", "ny"});
        config.x_left =
            require_scalar<double>(source_name, node, "x_left", "number");
        config.x_right =
            require_scalar<double>(source_name, node, "x_right", "number");
        config.n_cells =
            require_scalar<long>(source_name, node, "n_cells", "integer");
        read_scalar(source_name, node, "y_left", "number", &config.y_left);
        read_scalar(source_name, node, "y_right", "number", &config.y_right);
        read_scalar(source_name, node, "ny", "integer", &config.ny);
    }

    if (const YAML::Node node = section(source_name, root, "scheme", false)) {
        require_known_keys(source_name, node, "scheme",
                           {"flux", "theta", "cfl_safety", "quadrature"});
        if (const YAML::Node flux = node["flux"]) {
            const std::string name =
                value_as<std::string>(source_name, flux, "flux", "string");
            try {
                config.scheme.family = flux_family_from_string(name);
            } catch (const ConfigError& err) {
                fail(source_name, flux, err.what());
            }
        }
        read_scalar(source_name, node, "theta", "number",
                    &config.scheme.theta);
        read_scalar(source_name, node, "cfl_safety", "number",
                    &config.scheme.cfl_safety);
        if (const YAML::Node quad = node["quadrature"]) {
            const std::string name = value_as<std::string>(
                source_name, quad, "quadrature", "string");
            if (name == "mean") {
                config.scheme.quadrature = QuadratureRule::mean;
            } else if (name == "left") {
                config.scheme.quadrature = QuadratureRule::left;
            } else {
                fail(source_name, quad,
                     "unknown quadrature rule '" + name +
                         "' (expected 'mean' or 'left')");
            }
        }
    }

    {
        const YAML::Node node = section(source_name, root, "time", true);
        require_known_keys(source_name, node, "time", {"t_end", "snapshots"});
        config.t_end =
            require_scalar<double>(source_name, node, "t_end", "number");
        if (const YAML::Node snaps = node["snapshots"]) {
            if (!snaps.IsSequence())
                fail(source_name, snaps,
                     "'snapshots' must be a sequence of numbers");
            for (const YAML::Node& entry : snaps) {
                config.snapshot_times.push_back(value_as<double>(
                    source_name, entry, "snapshots", "number"));
            }
        }
    }

    if (const YAML::Node node =
            section(source_name, root, "monitors", false)) {
        require_known_keys(source_name, node, "monitors",
                           {"stability", "conv_differences"});
        read_scalar(source_name, node, "stability", "boolean",
                    &config.monitor_stability);
        read_scalar(source_name, node, "conv_differences", "boolean",
                    &config.monitor_conv_differences);
    }

    if (const YAML::Node node =
            section(source_name, root, "converge", false)) {
        require_known_keys(source_name, node, "converge", {"levels"});
        read_scalar(source_name, node, "levels", "integer",
                    &config.converge_levels);
    }

    if (const YAML::Node node = section(source_name, root, "entropy", false)) {
        require_known_keys(source_name, node, "entropy",
                           {"alphas", "tolerance"});
        read_scalar(source_name, node, "alphas", "integer",
                    &config.entropy_alphas);
        read_scalar(source_name, node, "tolerance", "number",
                    &config.entropy_tolerance);
    }

    if (const YAML::Node node = root["seed"]) {
        config.seed =
            value_as<unsigned long>(source_name, node, "seed", "integer");
    }

    return config;
}

}  // namespace

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

void validate_config(const RunConfig& config, const ModelSpec& model) {
    validate_model(model);

    if (config.n_cells <= 0)
        throw ConfigError("n_cells must be positive");
    if (!(config.x_right > config.x_left))
        throw ConfigError("x_right must exceed x_left");
    if (!(config.t_end > 0.0))
        throw ConfigError("t_end must be positive");
    if (!(config.scheme.cfl_safety > 0.0) || config.scheme.cfl_safety > 1.0)
        throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!(config.entropy_tolerance > 0.0))
        throw ConfigError("entropy tolerance must be positive");

    double sup_sigma = 0.0;
    for (const Component& comp : model.comp)
        sup_sigma = std::max(sup_sigma, comp.sigma.sup);
    if (config.scheme.family == FluxFamily::lax_friedrichs) {
        const double theta_hi = 2.0 / (3.0 * sup_sigma);
        if (!(config.scheme.theta > 0.0) ||
            !(config.scheme.theta < theta_hi)) {
            throw DegenerateModel(
                "theta = " + std::to_string(config.scheme.theta) +
                " outside the admissible interval (0, " +
                std::to_string(theta_hi) + ")");
        }
    }

    const double dx = (config.x_right - config.x_left) /
                      static_cast<double>(config.n_cells);
    if (model.dimension == 1) {
        build_weights_matrix(model, dx);
    } else {
        if (config.ny <= 0)
            throw ConfigError("2D runs need a positive ny");
        if (!(config.y_right > config.y_left))
            throw ConfigError("y_right must exceed y_left");
        const double dy = (config.y_right - config.y_left) /
                          static_cast<double>(config.ny);
        if (std::abs(dx - dy) > 1e-12 * std::max(std::abs(dx), 1.0))
            throw ConfigError(
                "2D grids must be square: dx = " + std::to_string(dx) +
                " but dy = " + std::to_string(dy));
        build_weights_matrix_2d(model, dx);
    }

    const double t_tol = 1e-12 * std::max(1.0, config.t_end);
    for (double s : config.snapshot_times) {
        if (s < -t_tol || s > config.t_end + t_tol)
            throw ConfigError(
                "snapshot time " + std::to_string(s) +
                " outside [0, t_end]");
    }
}

}  // namespace nlfv
