#ifndef NLFV_KERNEL_HPP
#define NLFV_KERNEL_HPP

#include <memory>
#include <vector>

#include "nlfv/grid.hpp"
#include "nlfv/model.hpp"

namespace nlfv {

// Discrete interface-sampled kernel on a grid of spacing dx. The weight for
// offset r (p_lo <= r <= p_hi) is density((r + 1/2) dx); weights are stored
// twice, in natural order (weight[r - p_lo]) and reversed, the latter for
// contiguous inner products against ascending state indices. mass is
// dx * sum of weights; the samples are used as-is, without renormalizing the
// discrete mass to 1.
struct KernelWeights {
    double dx = 0.0;
    long p_lo = 0;
    long p_hi = 0;
    std::vector<double> weight;
    std::vector<double> weight_rev;
    double mass = 0.0;
};

// Sample a kernel at interface offsets. Offsets start from the support
// [x_lo, x_hi] and zero-valued edge samples are trimmed. Throws
// InsufficientResolution when no sample of the support remains (dx wider than
// the support allows).
KernelWeights build_kernel_weights(const Kernel1D& kernel, double dx);

// Interface values of the state by a convex combination of the adjacent
// cells. QuadratureRule::mean averages them; QuadratureRule::left takes the
// left cell. Out-of-domain neighbors count as zero.
enum class QuadratureRule { mean, left };

std::vector<double> interface_values(const std::vector<double>& u,
                                     QuadratureRule rule);

// Convolution values at the M+1 interfaces of a grid with M cells:
//   c[h] = dx * sum_r weight[r] * v[h - r]
// with v the interface values of u (zero outside the domain).
std::vector<double> convolve(const KernelWeights& weights,
                             const std::vector<double>& u,
                             QuadratureRule rule);

// Per-interface convolution vectors for all components of a system:
// field[k][h * n + j] is the kernel-j-against-component-j value feeding
// component k at interface h. Shared kernel objects are convolved once.
struct ConvolutionField {
    int n_components = 0;
    long n_interfaces = 0;
    std::vector<std::vector<double>> c;  // c[k], length n_interfaces * n

    std::span<const double> at(int k, long h) const {
        return {c[k].data() + h * n_components,
                static_cast<size_t>(n_components)};
    }
};

using WeightsMatrix =
    std::vector<std::vector<std::shared_ptr<const KernelWeights>>>;

// Discretize every kernel of a 1D model on spacing dx, deduplicating shared
// kernel objects.
WeightsMatrix build_weights_matrix(const ModelSpec& model, double dx);

ConvolutionField convolution_field(const WeightsMatrix& weights,
                                   const std::vector<std::vector<double>>& u,
                                   QuadratureRule rule);

// Largest violation of the adjacent-interface increment bound
//   sum_j |c[j][h] - c[j][h-1]| <= bound_k1 * dx,
// returned as max over interfaces and components of (lhs - rhs). A compliant
// field gives a non-positive result up to rounding.
double convolution_first_difference_excess(const ConvolutionField& field,
                                           double bound_k1, double dx);

// Same for the centered second difference against bound_k2 * dx^2 with
//   sum_j |c[j][h+1] - 2 c[j][h] + c[j][h-1]|.
double convolution_second_difference_excess(const ConvolutionField& field,
                                            double bound_k2, double dx);

// sup_j sum_k bound constants of a model: k1 = max_k sum_j sup|mu'_{jk}| *
// ||u_j||_L1 and k2 = max_k sum_j 2 sup|mu''_{jk}| * ||u_j||_L1, with
// ||u_j||_L1 = dx * sum_i |u_j,i| of the current state.
double increment_bound_k1(const ModelSpec& model,
                          const std::vector<double>& l1_norms);
double increment_bound_k2(const ModelSpec& model,
                          const std::vector<double>& l1_norms);

}  // namespace nlfv

#endif
