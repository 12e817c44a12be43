#ifndef NLFV_FLUX_HPP
#define NLFV_FLUX_HPP

#include <string>

#include "nlfv/kernel.hpp"
#include "nlfv/model.hpp"

namespace nlfv {

enum class FluxFamily { lax_friedrichs, godunov };

// Scheme parameters shared by the 1D and 2D solvers. theta is the numerical
// viscosity coefficient of the Lax-Friedrichs flux and must stay inside
// (0, 2 / (3 sup sigma)); lambda is dt/dx. cfl_safety in (0, 1] scales the
// largest stable lambda. debug_antidiffusion flips the sign of the viscosity
// term inside the marching step only (the entropy auditor keeps the correct
// flux); it exists to exercise the entropy monitor and must stay off in
// production runs.
struct SchemeConfig {
    FluxFamily family = FluxFamily::lax_friedrichs;
    double theta = 1.0 / 3.0;
    double cfl_safety = 1.0;
    QuadratureRule quadrature = QuadratureRule::mean;
    bool debug_antidiffusion = false;
};

// Numerical flux F(a, ubar_l, ubar_r) of one component, where a is the
// velocity factor nu(c) at the interface and ubar the sigma-weighted states.
//   lax_friedrichs: (a/2)(f(l)+f(r)) - (theta/(2 lambda))(r - l)
//   godunov:        a f(l) if a >= 0 else a f(r), requiring f nondecreasing
double numerical_flux(const Component& comp, const SchemeConfig& scheme,
                      double lambda, double a, double ubar_l, double ubar_r);

// Same in the second coordinate direction of a 2D component (flux_y,
// velocity handled by the caller).
double numerical_flux_y(const Component& comp, const SchemeConfig& scheme,
                        double lambda, double a, double ubar_l, double ubar_r);

// Largest lambda = dt/dx for which the marching step is monotone, minimized
// over components:
//   lax_friedrichs: min(1, 4 - 6 theta s, 6 theta s) / (1 + 6 s L V)
//   godunov:        1 / (6 s L V)
// with s = sup sigma, L = lip flux, V = sup velocity of each component.
// Throws DegenerateModel when a bound degenerates to zero (for instance
// theta outside its admissible range) and UnsupportedFlux for a Godunov
// request on a component whose flux is not nondecreasing.
double max_stable_lambda(const ModelSpec& model, const SchemeConfig& scheme);

// Directional variant for the 2D scheme: the per-direction bound carries an
// extra factor 1/2 because both directions advance in one unsplit step.
// Returns the minimum over both directions and all components.
double max_stable_lambda_2d(const ModelSpec& model,
                            const SchemeConfig& scheme);

// One explicit update of a single cell value, exposed for monotonicity
// checks:
//   H(u_m, u_0, u_p) = u_0 - lambda *
//     [F(a_r, s_0 u_0, s_p u_p) - F(a_l, s_m u_m, s_0 u_0)]
// where s_* are the sigma values at the three cells and a_l, a_r the
// velocity factors at the two interfaces.
double scheme_update_value(const Component& comp, const SchemeConfig& scheme,
                           double lambda, double a_l, double a_r,
                           double sigma_m, double sigma_0, double sigma_p,
                           double u_m, double u_0, double u_p);

// Entropy flux of the comparison inequality at threshold alpha:
//   G(a, p, q) = F(a, s_l (p v k_l), s_r (q v k_r))
//              - F(a, s_l (p ^ k_l), s_r (q ^ k_r))
// with k_l = alpha / s_l, k_r = alpha / s_r, v/^ max/min. p and q are the
// unweighted cell values left and right of the interface.
double crandall_majda_flux(const Component& comp, const SchemeConfig& scheme,
                           double lambda, double a, double sigma_l,
                           double sigma_r, double p, double q, double alpha);

FluxFamily flux_family_from_string(const std::string& name);
const char* to_string(FluxFamily family);

}  // namespace nlfv

#endif
