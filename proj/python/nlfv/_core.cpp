// Python bindings for the solver library: builtin models, 1D and 2D
// marching with monitor summaries, refinement studies, the entropy audit,
// and coefficient sampling. Results cross the boundary as plain dicts of
// numpy arrays and scalars.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nlfv/analysis.hpp"
#include "nlfv/config.hpp"
#include "nlfv/flux.hpp"
#include "nlfv/model.hpp"
#include "nlfv/solver1d.hpp"
#include "nlfv/solver2d.hpp"

namespace py = pybind11;
using namespace nlfv;

namespace {

SchemeConfig make_scheme(const std::string& flux, double theta,
                         double cfl_safety, const std::string& quadrature,
                         bool debug_antidiffusion) {
    SchemeConfig scheme;
    scheme.family = flux_family_from_string(flux);
    scheme.theta = theta;
    scheme.cfl_safety = cfl_safety;
    if (quadrature == "mean") {
        scheme.quadrature = QuadratureRule::mean;
    } else if (quadrature == "left") {
        scheme.quadrature = QuadratureRule::left;
    } else {
        throw ConfigError("unknown quadrature rule '" + quadrature +
                          "' (choices: mean, left)");
    }
    scheme.debug_antidiffusion = debug_antidiffusion;
    return scheme;
}

py::array_t<double> vector_array(const std::vector<double>& values) {
    std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(values.size())};
    py::array_t<double> out(shape);
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

py::array_t<double> state_array(const std::vector<std::vector<double>>& u,
                                std::vector<py::ssize_t> shape) {
    shape.insert(shape.begin(), static_cast<py::ssize_t>(u.size()));
    py::array_t<double> out(shape);
    double* data = out.mutable_data();
    for (const std::vector<double>& comp : u)
        data = std::copy(comp.begin(), comp.end(), data);
    return out;
}

py::list finding_list(const MonitorReport& report) {
    py::list findings;
    for (const MonitorFinding& finding : report.findings)
        findings.append(finding.item + ": " + finding.detail);
    return findings;
}

py::dict table_dict(const ConvergenceTable& table) {
    std::vector<double> n_cells;
    std::vector<double> dx;
    std::vector<double> error;
    std::vector<double> rate;
    for (const ConvergenceRow& row : table.rows) {
        n_cells.push_back(static_cast<double>(row.n_cells));
        dx.push_back(row.dx);
        error.push_back(row.error);
        rate.push_back(row.rate);
    }
    py::dict out;
    out["n_cells"] = vector_array(n_cells);
    out["dx"] = vector_array(dx);
    out["error"] = vector_array(error);
    out["rate"] = vector_array(rate);
    out["finest_rate"] = table.finest_rate;
    out["rate_floor"] = table.rate_floor;
    out["rate_margin"] = table.rate_margin;
    out["meets_floor"] = table.meets_floor;
    return out;
}

py::dict run1d_py(const std::string& model_id, double x_left, double x_right,
                  long n_cells, double t_end, const std::string& flux,
                  double theta, double cfl_safety,
                  const std::string& quadrature,
                  const std::vector<double>& snapshots,
                  const std::vector<double>& entropy_alphas,
                  bool conv_differences, bool debug_antidiffusion) {
    const ModelSpec model = builtin_model(model_id);
    const Grid1D grid{x_left, x_right, n_cells};
    const SchemeConfig scheme =
        make_scheme(flux, theta, cfl_safety, quadrature, debug_antidiffusion);

    RunOptions options;
    options.check_conv_differences = conv_differences;
    options.entropy_alphas = entropy_alphas;
    options.snapshot_times = snapshots;
    py::list snapshot_list;
    options.on_snapshot = [&](const SystemState& state) {
        py::dict snap;
        snap["t"] = state.t;
        snap["u"] = state_array(state.u, {grid.n_cells});
        snapshot_list.append(snap);
    };

    const RunResult result = run(model, grid, scheme, t_end, options);
    const MonitorReport report = check_stability_monitors(model, result);

    std::vector<double> x(static_cast<size_t>(grid.n_cells));
    for (long i = 0; i < grid.n_cells; ++i)
        x[static_cast<size_t>(i)] = grid.center(i);

    py::dict out;
    out["x"] = vector_array(x);
    out["u"] = state_array(result.state.u, {grid.n_cells});
    out["sigma"] = state_array(result.state.sigma, {grid.n_cells});
    out["t"] = result.state.t;
    out["dx"] = grid.dx();
    out["lambda"] = result.lambda;
    out["dt"] = result.dt;
    out["n_steps"] = result.n_steps;
    out["min_value"] = report.min_value;
    out["mass_drift"] = report.mass_drift_rel;
    out["monitors_passed"] = report.findings.empty();
    out["monitor_findings"] = finding_list(report);
    out["snapshots"] = snapshot_list;
    if (!entropy_alphas.empty())
        out["entropy_max"] = vector_array(result.entropy_max_per_alpha);
    return out;
}

py::dict run2d_py(const std::string& model_id, double x_left, double x_right,
                  double y_left, double y_right, long nx, long ny,
                  double t_end, const std::string& flux, double theta,
                  double cfl_safety, const std::string& quadrature) {
    const ModelSpec model = builtin_model(model_id);
    const Grid2D grid{x_left, x_right, y_left, y_right, nx, ny};
    const SchemeConfig scheme =
        make_scheme(flux, theta, cfl_safety, quadrature, false);

    const RunResult2D result = run_2d(model, grid, scheme, t_end);
    const MonitorReport report = check_stability_monitors_2d(model, result);

    std::vector<double> x(static_cast<size_t>(grid.nx));
    for (long i = 0; i < grid.nx; ++i)
        x[static_cast<size_t>(i)] = grid.xcenter(i);
    std::vector<double> y(static_cast<size_t>(grid.ny));
    for (long j = 0; j < grid.ny; ++j)
        y[static_cast<size_t>(j)] = grid.ycenter(j);

    py::dict out;
    out["x"] = vector_array(x);
    out["y"] = vector_array(y);
    out["u"] = state_array(result.state.u, {grid.ny, grid.nx});
    out["t"] = result.state.t;
    out["dx"] = grid.dx();
    out["lambda"] = result.lambda;
    out["dt"] = result.dt;
    out["n_steps"] = result.n_steps;
    out["min_value"] = report.min_value;
    out["mass_drift"] = report.mass_drift_rel;
    out["monitors_passed"] = report.findings.empty();
    out["monitor_findings"] = finding_list(report);
    return out;
}

py::dict convergence_py(const std::string& model_id, double x_left,
                        double x_right, long n_cells, double t_end,
                        int levels, const std::string& flux, double theta,
                        double cfl_safety, const std::string& quadrature,
                        double y_left, double y_right, long ny) {
    const ModelSpec model = builtin_model(model_id);
    const SchemeConfig scheme =
        make_scheme(flux, theta, cfl_safety, quadrature, false);
    ConvergenceOptions options;
    options.levels = levels;

    if (model.dimension == 1) {
        const Grid1D base{x_left, x_right, n_cells};
        return table_dict(
            convergence_study(model, base, scheme, t_end, options));
    }
    const Grid2D base{x_left, x_right, y_left, y_right, n_cells,
                      ny > 0 ? ny : n_cells};
    return table_dict(
        convergence_study_2d(model, base, scheme, t_end, options));
}

py::dict entropy_py(const std::string& model_id, double x_left,
                    double x_right, long n_cells, double t_end, int alphas,
                    const std::string& flux, double theta, double cfl_safety,
                    const std::string& quadrature, bool debug_antidiffusion) {
    if (alphas <= 0)
        throw ConfigError("the entropy audit needs at least one threshold");
    const ModelSpec model = builtin_model(model_id);
    const Grid1D grid{x_left, x_right, n_cells};
    const SchemeConfig scheme =
        make_scheme(flux, theta, cfl_safety, quadrature, debug_antidiffusion);

    const SystemState initial = project_initial_data(model, grid);
    double hi = 0.0;
    for (int k = 0; k < initial.n_components; ++k)
        for (long i = 0; i < grid.n_cells; ++i)
            hi = std::max(hi, std::abs(initial.ubar(k, i)));
    hi *= 1.2;

    RunOptions options;
    for (int j = 0; j < alphas; ++j) {
        options.entropy_alphas.push_back(
            alphas == 1 ? 0.0
                        : hi * static_cast<double>(j) /
                              static_cast<double>(alphas - 1));
    }

    const RunResult result = run(model, grid, scheme, t_end, options);
    double worst = -std::numeric_limits<double>::infinity();
    for (const double value : result.entropy_max_per_alpha)
        worst = std::max(worst, value);

    py::dict out;
    out["alpha"] = vector_array(options.entropy_alphas);
    out["max_residual"] = vector_array(result.entropy_max_per_alpha);
    out["worst"] = worst;
    return out;
}

py::array_t<double> sigma_eval_py(const std::string& model_id, int component,
                                  py::array_t<double> x) {
    const ModelSpec model = builtin_model(model_id);
    if (component < 0 || component >= model.n_components)
        throw ConfigError("component index out of range");
    const auto& fn = model.comp[static_cast<size_t>(component)].sigma.value;

    const auto view = x.unchecked<1>();
    std::vector<py::ssize_t> shape{x.size()};
    py::array_t<double> out(shape);
    double* data = out.mutable_data();
    for (py::ssize_t i = 0; i < view.shape(0); ++i) data[i] = fn(view(i));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite-volume solver for coupled nonlocal conservation laws "
              "with discontinuous coefficients";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    m.def("builtin_models",
          [] { return std::vector<std::string>{"kk1d", "kk2d", "linadv"}; },
          "Identifiers of the bundled models.");

    m.def("preset_text",
          [](const std::string& name) { return preset_text(name); },
          py::arg("name"),
          "YAML text of a bundled configuration (paper-1d, paper-2d).");

    m.def("run1d", &run1d_py, py::arg("model"), py::arg("x_left"),
          py::arg("x_right"), py::arg("n_cells"), py::arg("t_end"),
          py::arg("flux") = "lax_friedrichs", py::arg("theta") = 1.0 / 3.0,
          py::arg("cfl_safety") = 1.0, py::arg("quadrature") = "mean",
          py::arg("snapshots") = std::vector<double>{},
          py::arg("entropy_alphas") = std::vector<double>{},
          py::arg("conv_differences") = false,
          py::arg("debug_antidiffusion") = false,
          "March a 1D model to t_end and return the state, the monitor "
          "summary, and any requested snapshots or entropy residuals.");

    m.def("run2d", &run2d_py, py::arg("model"), py::arg("x_left"),
          py::arg("x_right"), py::arg("y_left"), py::arg("y_right"),
          py::arg("nx"), py::arg("ny"), py::arg("t_end"),
          py::arg("flux") = "lax_friedrichs", py::arg("theta") = 1.0 / 3.0,
          py::arg("cfl_safety") = 1.0, py::arg("quadrature") = "mean",
          "March a 2D model to t_end and return the state (shape "
          "(components, ny, nx)) and the monitor summary.");

    m.def("convergence_study", &convergence_py, py::arg("model"),
          py::arg("x_left"), py::arg("x_right"), py::arg("n_cells"),
          py::arg("t_end"), py::arg("levels") = 4,
          py::arg("flux") = "lax_friedrichs", py::arg("theta") = 1.0 / 3.0,
          py::arg("cfl_safety") = 1.0, py::arg("quadrature") = "mean",
          py::arg("y_left") = 0.0, py::arg("y_right") = 0.0,
          py::arg("ny") = 0,
          "Self-refinement error table with rates and the proven floor.");

    m.def("entropy_scan", &entropy_py, py::arg("model"), py::arg("x_left"),
          py::arg("x_right"), py::arg("n_cells"), py::arg("t_end"),
          py::arg("alphas") = 21, py::arg("flux") = "lax_friedrichs",
          py::arg("theta") = 1.0 / 3.0, py::arg("cfl_safety") = 1.0,
          py::arg("quadrature") = "mean",
          py::arg("debug_antidiffusion") = false,
          "Largest entropy residual per threshold over a whole run.");

    m.def("sigma_eval", &sigma_eval_py, py::arg("model"),
          py::arg("component"), py::arg("x"),
          "Sample the spatial coefficient of one component.");
}
