#ifndef NLFV_MODEL_HPP
#define NLFV_MODEL_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlfv/errors.hpp"

namespace nlfv {

using ScalarFn = std::function<double(double)>;
// Velocity of one component: maps the vector of convolution values (one entry
// per component) to a scalar speed factor.
using VelocityFn = std::function<double(std::span<const double>)>;

// Normalized 1D convolution kernel. density integrates to 1 over [x_lo, x_hi]
// and returns 0 outside. sup_deriv1/2 are sup-norm bounds of the first and
// second derivative, used by the convolution increment checks.
struct Kernel1D {
    ScalarFn density;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double normalization = 1.0;
    double sup_deriv1 = 0.0;
    double sup_deriv2 = 0.0;
};

// Normalized 2D convolution kernel supported on a disk of the given radius.
// sup_grad_x / sup_grad_y bound |d density/dx| and |d density/dy|.
struct Kernel2D {
    std::function<double(double, double)> density;
    double radius = 0.0;
    double normalization = 1.0;
    double sup_grad_x = 0.0;
    double sup_grad_y = 0.0;
};

// Spatial coefficient sigma^k. value must be right-continuous, bounded away
// from zero (inf > 0), with total variation tv and supremum sup.
struct Sigma {
    ScalarFn value;
    double inf = 1.0;
    double sup = 1.0;
    double tv = 0.0;
};

// Initial datum of one component. average, when provided, returns the exact
// mean of the datum over an interval and makes the cell projection exact;
// otherwise the projection falls back to composite quadrature.
struct InitialData1D {
    ScalarFn value;
    std::function<double(double, double)> average;
};

// 2D initial datum; average(ax, bx, ay, by) is the exact mean over a cell.
struct InitialData2D {
    std::function<double(double, double)> value;
    std::function<double(double, double, double, double)> average;
};

// Everything the scheme needs about one solution component. The _y members
// describe the second coordinate direction and are only populated for 2D
// models. The lip_* / sup_* constants are conservative analytic bounds over
// the documented invariant region of the convolution values; they feed the
// time-step restriction and the growth-bound monitors.
struct Component {
    ScalarFn flux;
    double lip_flux = 0.0;
    bool flux_nondecreasing = false;
    VelocityFn velocity;
    double sup_velocity = 0.0;
    double lip_velocity = 0.0;
    double lip_velocity_grad = 0.0;
    Sigma sigma;

    ScalarFn flux_y;
    double lip_flux_y = 0.0;
    bool flux_y_nondecreasing = false;
    VelocityFn velocity_y;
    double sup_velocity_y = 0.0;
    double lip_velocity_y = 0.0;
    double lip_velocity_grad_y = 0.0;
};

// A coupled system of nonlocal conservation laws. kernel[j][k] is convolved
// with component j and feeds slot j of the velocity argument of component k.
// Kernel entries may share objects; shared entries are convolved once.
struct ModelSpec {
    std::string id;
    int dimension = 1;
    int n_components = 0;
    std::vector<Component> comp;

    std::vector<std::vector<std::shared_ptr<const Kernel1D>>> kernel;
    std::vector<std::vector<std::shared_ptr<const Kernel2D>>> kernel2d;
    std::vector<std::vector<std::shared_ptr<const Kernel2D>>> kernel2d_y;

    std::vector<InitialData1D> initial;
    std::vector<InitialData2D> initial2d;

    // Exact-solution cell average (component, a, b, t), when a closed form
    // exists; empty otherwise.
    std::function<double(int, double, double, double)> exact_average;
};

// Two-component 1D system with identity local flux, velocity
// nu(a,b) = (1 - a^2 - b^2)^3 applied to a shared one-sided bump kernel, and
// a right-continuous staircase coefficient accumulating at x = 3.
ModelSpec builtin_kk1d();

// Two-component 2D system with identity local fluxes, x-velocity
// sin(a^2+b^2), y-velocity cos(a^2+b^2), a shared disk kernel of radius 0.4,
// and unit coefficient.
ModelSpec builtin_kk2d();

// Single-component control case: identity flux, velocity identically 1, unit
// coefficient; the solution translates at unit speed, so an exact solution is
// available.
ModelSpec builtin_linear_advection();

// Look up a builtin by id ("kk1d", "kk2d", "linadv"). Throws ConfigError on
// an unknown id.
ModelSpec builtin_model(std::string_view id);

// Right-continuous staircase: a_n/3 on [a_n, a_{n+1}) with
// a_n = 3(1 - 0.8^n), extended left of a_1 by its first value and equal to 1
// for x >= 3 (the accumulation value).
double sigma_staircase_eval(double x);

// Structural validation: dimensions consistent, sigma bounded away from zero,
// kernel matrix shape n x n. Throws ConfigError / DegenerateModel.
void validate_model(const ModelSpec& model);

}  // namespace nlfv

#endif
