#include "nlfv/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace nlfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mass sums feed a 1e-11 drift monitor, so they are accumulated in extended
// precision to keep summation noise well below it.
double stable_sum_abs(const std::vector<double>& values) {
    long double sum = 0.0L;
    for (double v : values) sum += std::abs(static_cast<long double>(v));
    return static_cast<double>(sum);
}

double cell_average_quadrature(const ScalarFn& f, double a, double b) {
    // 16-panel midpoint rule; robust for discontinuous data.
    const int panels = 16;
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i)
        sum += f(a + (static_cast<double>(i) + 0.5) * h);
    return sum / panels;
}

long kernel_span_cells(const WeightsMatrix& weights) {
    long span = 0;
    for (const auto& row : weights)
        for (const auto& w : row)
            span = std::max(span, w->p_hi - w->p_lo + 1);
    return span;
}

double state_sup(const SystemState& state) {
    double sup = 0.0;
    for (const auto& u : state.u)
        for (double v : u) sup = std::max(sup, std::abs(v));
    return sup;
}

// Diagnostics of the state as it stands (used for the step-0 entry).
StepDiagnostics measure_state(const SystemState& state) {
    StepDiagnostics diag;
    diag.t = state.t;
    diag.dt = 0.0;
    diag.min_value = kInf;
    const double dx = state.grid.dx();
    const long m = state.grid.n_cells;
    for (int k = 0; k < state.n_components; ++k) {
        const auto& u = state.u[static_cast<size_t>(k)];
        const auto& sg = state.sigma[static_cast<size_t>(k)];
        double linf = 0.0;
        double tv = 0.0;
        double prev_ubar = 0.0;
        for (long i = 0; i < m; ++i) {
            const double ubar = sg[static_cast<size_t>(i)] *
                                u[static_cast<size_t>(i)];
            diag.min_value = std::min(diag.min_value,
                                      u[static_cast<size_t>(i)]);
            linf = std::max(linf, std::abs(ubar));
            tv += std::abs(ubar - prev_ubar);
            prev_ubar = ubar;
        }
        tv += std::abs(prev_ubar);  // jump back to the zero padding
        diag.l1.push_back(dx * stable_sum_abs(u));
        diag.linf_ubar.push_back(linf);
        diag.tv_ubar.push_back(tv);
    }
    return diag;
}

void check_initial_clearance(const SystemState& state, long window_cells,
                             double tol) {
    const long m = state.grid.n_cells;
    const long w = std::min(window_cells, m);
    for (int k = 0; k < state.n_components; ++k) {
        const auto& u = state.u[static_cast<size_t>(k)];
        for (long i = 0; i < w; ++i) {
            if (std::abs(u[static_cast<size_t>(i)]) > tol ||
                std::abs(u[static_cast<size_t>(m - 1 - i)]) > tol) {
                throw SupportClipped(
                    "initial data reaches within one kernel width of the "
                    "domain boundary; enlarge the domain");
            }
        }
    }
}

void check_boundary_ring(const SystemState& state, double tol) {
    const long m = state.grid.n_cells;
    for (int k = 0; k < state.n_components; ++k) {
        const auto& u = state.u[static_cast<size_t>(k)];
        const double left = std::abs(u[0]);
        const double right = std::abs(u[static_cast<size_t>(m - 1)]);
        if (left > tol || right > tol) {
            throw SupportClipped(
                "state reached the domain boundary (value " +
                std::to_string(std::max(left, right)) + " at step " +
                std::to_string(state.step_index) +
                "); enlarge the domain or shorten the run");
        }
    }
}

// Conservative growth constants over all components.
void fill_growth_bounds(const ModelSpec& model, const StepDiagnostics& start,
                        DiagnosticBounds& bounds) {
    bounds.k1 = increment_bound_k1(model, start.l1);
    bounds.k2 = increment_bound_k2(model, start.l1);
    double rate = 0.0;
    for (const Component& comp : model.comp) {
        rate = std::max(rate, comp.sigma.sup * comp.lip_flux *
                                  comp.lip_velocity);
    }
    bounds.k3 = bounds.k1 * rate;
    bounds.k4 = bounds.k3;
}

// Inhomogeneous production term of the variation bound, given the largest
// weighted sup norm seen so far.
double variation_production(const ModelSpec& model,
                            const DiagnosticBounds& bounds,
                            double running_sup_ubar, double total_l1) {
    double sigma_tv = 0.0;
    double sigma_sup = 0.0;
    double lip_f = 0.0;
    double lip_nu = 0.0;
    double lip_grad_nu = 0.0;
    for (const Component& comp : model.comp) {
        sigma_tv = std::max(sigma_tv, comp.sigma.tv);
        sigma_sup = std::max(sigma_sup, comp.sigma.sup);
        lip_f = std::max(lip_f, comp.lip_flux);
        lip_nu = std::max(lip_nu, comp.lip_velocity);
        lip_grad_nu = std::max(lip_grad_nu, comp.lip_velocity_grad);
    }
    const double ubar_l1 = sigma_sup * total_l1;
    return bounds.k1 * sigma_tv * lip_f * lip_nu * running_sup_ubar +
           lip_f * sigma_sup *
               (lip_nu * bounds.k2 +
                2.0 * lip_grad_nu * bounds.k1 * bounds.k1) *
               ubar_l1;
}

}  // namespace

SystemState project_initial_data(const ModelSpec& model, const Grid1D& grid) {
    if (model.dimension != 1)
        throw ConfigError("1D projection needs a 1D model");
    SystemState state;
    state.grid = grid;
    state.n_components = model.n_components;
    const double dx = grid.dx();
    const size_t n = static_cast<size_t>(model.n_components);
    const size_t m = static_cast<size_t>(grid.n_cells);
    state.u.assign(n, std::vector<double>(m));
    state.sigma.assign(n, std::vector<double>(m));
    for (size_t k = 0; k < n; ++k) {
        const InitialData1D& data = model.initial[k];
        const Sigma& sigma = model.comp[k].sigma;
        for (size_t i = 0; i < m; ++i) {
            const double a = grid.interface(static_cast<long>(i));
            const double b = a + dx;
            state.u[k][i] = data.average ? data.average(a, b)
                                         : cell_average_quadrature(data.value,
                                                                   a, b);
            state.sigma[k][i] =
                sigma.value(grid.center(static_cast<long>(i)));
        }
    }
    return state;
}

StepDiagnostics step(SystemState& state, const ModelSpec& model,
                     const SchemeConfig& scheme, const WeightsMatrix& weights,
                     double dt, ConvolutionField* out_conv) {
    const double dx = state.grid.dx();
    const double lambda = dt / dx;
    const long m = state.grid.n_cells;
    const int n = state.n_components;

    ConvolutionField field = convolution_field(weights, state.u,
                                               scheme.quadrature);

    StepDiagnostics diag;
    diag.t = state.t + dt;
    diag.dt = dt;
    diag.min_value = kInf;

    long double increment = 0.0L;
    std::vector<double> velocity(static_cast<size_t>(m) + 1);
    std::vector<double> flux(static_cast<size_t>(m) + 1);
    std::vector<double> fresh(static_cast<size_t>(m));

    for (int k = 0; k < n; ++k) {
        const Component& comp = model.comp[static_cast<size_t>(k)];
        auto& u = state.u[static_cast<size_t>(k)];
        const auto& sg = state.sigma[static_cast<size_t>(k)];

        // Walls carry no flux; the interior interfaces get the numerical
        // flux of the weighted neighbor states.
        velocity[0] = 0.0;
        velocity[static_cast<size_t>(m)] = 0.0;
        flux[0] = 0.0;
        flux[static_cast<size_t>(m)] = 0.0;
        for (long h = 1; h < m; ++h) {
            velocity[static_cast<size_t>(h)] =
                comp.velocity(field.at(k, h));
            flux[static_cast<size_t>(h)] = numerical_flux(
                comp, scheme, lambda, velocity[static_cast<size_t>(h)],
                sg[static_cast<size_t>(h - 1)] * u[static_cast<size_t>(h - 1)],
                sg[static_cast<size_t>(h)] * u[static_cast<size_t>(h)]);
        }

        double linf = 0.0;
        double tv = 0.0;
        double prev_ubar = 0.0;
        for (long i = 0; i < m; ++i) {
            const double next =
                u[static_cast<size_t>(i)] -
                lambda * (flux[static_cast<size_t>(i + 1)] -
                          flux[static_cast<size_t>(i)]);
            if (!std::isfinite(next)) {
                throw NonFiniteState(
                    "non-finite value in component " + std::to_string(k) +
                    ", cell " + std::to_string(i) + ", step " +
                    std::to_string(state.step_index + 1));
            }
            fresh[static_cast<size_t>(i)] = next;
            increment += std::abs(
                static_cast<long double>(next - u[static_cast<size_t>(i)]));
            diag.min_value = std::min(diag.min_value, next);
            const double ubar = sg[static_cast<size_t>(i)] * next;
            linf = std::max(linf, std::abs(ubar));
            tv += std::abs(ubar - prev_ubar);
            prev_ubar = ubar;
        }
        tv += std::abs(prev_ubar);
        u.swap(fresh);

        diag.l1.push_back(dx * stable_sum_abs(u));
        diag.linf_ubar.push_back(linf);
        diag.tv_ubar.push_back(tv);
    }

    diag.time_increment_l1 = dx * static_cast<double>(increment);
    state.t += dt;
    state.step_index += 1;
    if (out_conv) *out_conv = std::move(field);
    return diag;
}

double entropy_residual(const SystemState& prev, const SystemState& next,
                        const ModelSpec& model, const SchemeConfig& scheme,
                        const ConvolutionField& field, double dt,
                        double alpha) {
    if (!(alpha >= 0.0))
        throw ConfigError("entropy thresholds must be nonnegative");
    const double dx = prev.grid.dx();
    const double lambda = dt / dx;
    const long m = prev.grid.n_cells;

    double worst = -kInf;
    for (int k = 0; k < prev.n_components; ++k) {
        const Component& comp = model.comp[static_cast<size_t>(k)];
        const auto& u = prev.u[static_cast<size_t>(k)];
        const auto& up = next.u[static_cast<size_t>(k)];
        const auto& sg = prev.sigma[static_cast<size_t>(k)];
        const double f_alpha = comp.flux(alpha);

        for (long i = 0; i < m; ++i) {
            // Wall interfaces carry velocity 0 and comparison flux 0,
            // matching the zero wall flux of the marching step.
            double a_l = 0.0;
            double a_r = 0.0;
            double g_l = 0.0;
            double g_r = 0.0;
            if (i > 0) {
                a_l = comp.velocity(field.at(k, i));
                g_l = crandall_majda_flux(
                    comp, scheme, lambda, a_l, sg[static_cast<size_t>(i - 1)],
                    sg[static_cast<size_t>(i)], u[static_cast<size_t>(i - 1)],
                    u[static_cast<size_t>(i)], alpha);
            }
            if (i < m - 1) {
                a_r = comp.velocity(field.at(k, i + 1));
                g_r = crandall_majda_flux(
                    comp, scheme, lambda, a_r, sg[static_cast<size_t>(i)],
                    sg[static_cast<size_t>(i + 1)], u[static_cast<size_t>(i)],
                    u[static_cast<size_t>(i + 1)], alpha);
            }
            const double kap = alpha / sg[static_cast<size_t>(i)];
            const double dev_next = up[static_cast<size_t>(i)] - kap;
            const double sgn =
                dev_next > 0.0 ? 1.0 : (dev_next < 0.0 ? -1.0 : 0.0);
            const double residual =
                std::abs(dev_next) -
                std::abs(u[static_cast<size_t>(i)] - kap) +
                lambda * (g_r - g_l) +
                lambda * sgn * f_alpha * (a_r - a_l);
            worst = std::max(worst, residual);
        }
    }
    return worst;
}

RunResult run(const ModelSpec& model, const Grid1D& grid,
              const SchemeConfig& scheme, double t_end,
              const RunOptions& options) {
    validate_model(model);
    if (model.dimension != 1) throw ConfigError("1D run needs a 1D model");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(scheme.cfl_safety > 0.0) || scheme.cfl_safety > 1.0)
        throw ConfigError("cfl_safety must lie in (0, 1]");

    const double dx = grid.dx();
    const WeightsMatrix weights = build_weights_matrix(model, dx);
    const double lambda = scheme.cfl_safety * max_stable_lambda(model, scheme);
    const double dt = lambda * dx;

    RunResult result;
    result.state = project_initial_data(model, grid);
    result.lambda = lambda;
    result.dt = dt;

    const double sup0 = state_sup(result.state);
    if (options.check_support) {
        check_initial_clearance(result.state,
                                kernel_span_cells(weights) + 1,
                                1e-13 * std::max(1.0, sup0));
    }
    const double ring_tol = 1e-3 * std::max(1.0, sup0);

    result.series.push_back(measure_state(result.state));
    fill_growth_bounds(model, result.series.front(), result.bounds);

    const bool audit_entropy = !options.entropy_alphas.empty();
    result.entropy_max_per_alpha.assign(options.entropy_alphas.size(),
                                        -kInf);

    // Spans between scheduled stop times; every snapshot time and t_end is
    // landed on exactly by shortening the closing step of its span.
    const double t_tol = 1e-12 * std::max(1.0, t_end);
    std::set<double> stop_set{t_end};
    bool want_initial_snapshot = false;
    for (double s : options.snapshot_times) {
        if (s < -t_tol || s > t_end + t_tol)
            throw ConfigError("snapshot times must lie in [0, t_end]");
        if (s <= t_tol) {
            want_initial_snapshot = true;
        } else {
            stop_set.insert(std::min(s, t_end));
        }
    }

    auto emit_snapshot = [&](bool requested) {
        if (requested && options.on_snapshot)
            options.on_snapshot(result.state);
    };
    emit_snapshot(want_initial_snapshot);

    double k6 = 0.0;
    double running_sup_ubar = 0.0;
    for (double v : result.series.front().linf_ubar)
        running_sup_ubar = std::max(running_sup_ubar, v);

    for (double stop : stop_set) {
        const double span = stop - result.state.t;
        long n_steps = static_cast<long>(std::ceil(span / dt - 1e-9));
        if (n_steps < 1) n_steps = 1;
        for (long s = 0; s < n_steps; ++s) {
            const bool closing = (s == n_steps - 1);
            const double dt_step =
                closing ? (stop - result.state.t) : dt;

            SystemState before;
            if (audit_entropy) before = result.state;

            ConvolutionField field;
            StepDiagnostics diag = step(result.state, model, scheme, weights,
                                        dt_step, &field);
            if (closing) {
                result.state.t = stop;
                diag.t = stop;
            }

            if (options.check_conv_differences) {
                diag.conv_first_excess = convolution_first_difference_excess(
                    field, result.bounds.k1, dx);
                diag.conv_second_excess = convolution_second_difference_excess(
                    field, result.bounds.k2, dx);
            }
            if (audit_entropy) {
                double residual = -kInf;
                for (size_t a = 0; a < options.entropy_alphas.size(); ++a) {
                    const double r = entropy_residual(
                        before, result.state, model, scheme, field, dt_step,
                        options.entropy_alphas[a]);
                    result.entropy_max_per_alpha[a] =
                        std::max(result.entropy_max_per_alpha[a], r);
                    residual = std::max(residual, r);
                }
                diag.entropy_residual_max = residual;
            }
            if (options.check_support)
                check_boundary_ring(result.state, ring_tol);

            k6 = std::max(k6, diag.time_increment_l1 / dt_step);
            for (double v : diag.linf_ubar)
                running_sup_ubar = std::max(running_sup_ubar, v);
            result.series.push_back(std::move(diag));
        }
        emit_snapshot(
            std::any_of(options.snapshot_times.begin(),
                        options.snapshot_times.end(), [&](double s) {
                            return std::abs(s - stop) <= t_tol;
                        }));
    }

    result.n_steps = static_cast<long>(result.series.size()) - 1;
    result.bounds.k6 = k6;
    double total_l1 = 0.0;
    for (double v : result.series.front().l1) total_l1 += v;
    result.bounds.k5 = variation_production(model, result.bounds,
                                            running_sup_ubar, total_l1);
    return result;
}

MonitorReport check_stability_monitors(const ModelSpec& model,
                                       const RunResult& result) {
    MonitorReport report;
    report.bounds = result.bounds;
    const StepDiagnostics& start = result.series.front();
    const int n = static_cast<int>(start.l1.size());
    const double dx = result.state.grid.dx();
    const double log_slack = std::log1p(1e-9);

    auto record = [&report](const std::string& item, long step, double margin,
                            const std::string& detail) {
        report.passed = false;
        report.findings.push_back({item, step, margin, detail});
    };

    report.min_value = kInf;
    double worst_positivity = 0.0;
    long worst_positivity_step = -1;

    double worst_mass = 0.0;
    long worst_mass_step = -1;

    double worst_sup = -kInf;
    long worst_sup_step = -1;

    double worst_tv = -kInf;
    long worst_tv_step = -1;

    double running_sup_ubar = 0.0;
    double total_l1 = 0.0;
    for (double v : start.l1) total_l1 += v;

    for (size_t idx = 0; idx < result.series.size(); ++idx) {
        const StepDiagnostics& diag = result.series[idx];
        const long step_no = static_cast<long>(idx);
        report.min_value = std::min(report.min_value, diag.min_value);
        if (diag.min_value < worst_positivity) {
            worst_positivity = diag.min_value;
            worst_positivity_step = step_no;
        }
        for (double v : diag.linf_ubar)
            running_sup_ubar = std::max(running_sup_ubar, v);
        const double k5 = variation_production(model, result.bounds,
                                               running_sup_ubar, total_l1);

        for (int k = 0; k < n; ++k) {
            const double drift =
                std::abs(diag.l1[static_cast<size_t>(k)] -
                         start.l1[static_cast<size_t>(k)]) /
                std::max(start.l1[static_cast<size_t>(k)], 1e-300);
            if (drift > worst_mass) {
                worst_mass = drift;
                worst_mass_step = step_no;
            }

            const double linf0 = start.linf_ubar[static_cast<size_t>(k)];
            const double linf = diag.linf_ubar[static_cast<size_t>(k)];
            if (linf > 0.0 && linf0 > 0.0) {
                const double margin = std::log(linf) - std::log(linf0) -
                                      result.bounds.k3 * diag.t;
                if (margin > worst_sup) {
                    worst_sup = margin;
                    worst_sup_step = step_no;
                }
            } else if (linf > 0.0 && linf0 == 0.0) {
                record("sup-bound", step_no, kInf,
                       "weighted sup norm grew from exactly zero");
            }

            const double tv0 = start.tv_ubar[static_cast<size_t>(k)];
            const double tv = diag.tv_ubar[static_cast<size_t>(k)];
            if (tv > 0.0) {
                const double margin =
                    std::log(tv) - result.bounds.k4 * diag.t -
                    std::log(tv0 + k5 * diag.t);
                if (margin > worst_tv) {
                    worst_tv = margin;
                    worst_tv_step = step_no;
                }
            }
        }

        report.entropy_residual_max =
            std::max(report.entropy_residual_max, diag.entropy_residual_max);
        report.conv_first_excess =
            std::max(report.conv_first_excess, diag.conv_first_excess);
        report.conv_second_excess =
            std::max(report.conv_second_excess, diag.conv_second_excess);
    }

    report.mass_drift_rel = worst_mass;
    report.sup_log_margin = worst_sup;
    report.tv_log_margin = worst_tv;

    if (report.min_value < -1e-14) {
        record("positivity", worst_positivity_step, report.min_value,
               "cell value " + std::to_string(report.min_value) +
                   " below -1e-14");
    }
    if (worst_mass > 1e-11) {
        record("mass-conservation", worst_mass_step, worst_mass,
               "relative mass drift " + std::to_string(worst_mass) +
                   " above 1e-11");
    }
    if (worst_sup > log_slack) {
        record("sup-bound", worst_sup_step, worst_sup,
               "weighted sup norm exceeded its exponential bound (log "
               "excess " +
                   std::to_string(worst_sup) + ")");
    }
    if (worst_tv > log_slack) {
        record("variation-bound", worst_tv_step, worst_tv,
               "weighted variation exceeded its growth bound (log excess " +
                   std::to_string(worst_tv) + ")");
    }
    if (report.conv_first_excess >
        1e-10 * (1.0 + result.bounds.k1 * dx)) {
        record("convolution-increment", -1, report.conv_first_excess,
               "adjacent-interface convolution increment above its bound");
    }
    if (report.conv_second_excess >
        1e-10 * (1.0 + result.bounds.k2 * dx * dx)) {
        record("convolution-curvature", -1, report.conv_second_excess,
               "convolution second difference above its bound");
    }
    if (report.entropy_residual_max > 1e-12) {
        record("entropy", -1, report.entropy_residual_max,
               "entropy residual " +
                   std::to_string(report.entropy_residual_max) +
                   " above 1e-12");
    }

    return report;
}

void require_monitors(const MonitorReport& report) {
    if (report.passed) return;
    const MonitorFinding& finding = report.findings.front();
    throw MonitorViolation(finding.item, finding.step, finding.margin,
                           finding.detail);
}

}  // namespace nlfv
