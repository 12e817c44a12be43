#include "nlfv/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "nlfv/detail/dot.hpp"
#include "nlfv/errors.hpp"

namespace nlfv {

KernelWeights build_kernel_weights(const Kernel1D& kernel, double dx) {
    if (!(dx > 0.0)) throw ConfigError("kernel sampling needs dx > 0");

    // Offsets whose sample point (r + 1/2) dx can lie in the support. The
    // 1e-12 slack keeps samples exactly on a support edge (value zero for
    // the builtins) from flapping with rounding; zero edge samples are
    // trimmed below anyway.
    const long r_lo =
        static_cast<long>(std::ceil(kernel.x_lo / dx - 0.5 - 1e-12));
    const long r_hi =
        static_cast<long>(std::floor(kernel.x_hi / dx - 0.5 + 1e-12));
    if (r_hi < r_lo)
        throw InsufficientResolution(
            "grid spacing " + std::to_string(dx) +
            " places no sample inside the kernel support");

    std::vector<double> values;
    values.reserve(static_cast<size_t>(r_hi - r_lo + 1));
    for (long r = r_lo; r <= r_hi; ++r) {
        values.push_back(
            kernel.density((static_cast<double>(r) + 0.5) * dx));
    }

    long first = 0;
    long last = static_cast<long>(values.size()) - 1;
    while (first <= last && values[static_cast<size_t>(first)] == 0.0)
        ++first;
    while (last >= first && values[static_cast<size_t>(last)] == 0.0) --last;
    if (first > last)
        throw InsufficientResolution(
            "grid spacing " + std::to_string(dx) +
            " samples the kernel as identically zero");

    KernelWeights weights;
    weights.dx = dx;
    weights.p_lo = r_lo + first;
    weights.p_hi = r_lo + last;
    weights.weight.assign(values.begin() + first, values.begin() + last + 1);
    weights.weight_rev.assign(weights.weight.rbegin(),
                              weights.weight.rend());
    double sum = 0.0;
    for (double w : weights.weight) sum += w;
    weights.mass = dx * sum;
    return weights;
}

std::vector<double> interface_values(const std::vector<double>& u,
                                     QuadratureRule rule) {
    const size_t m = u.size();
    std::vector<double> v(m + 1);
    if (rule == QuadratureRule::mean) {
        v[0] = 0.5 * u[0];
        for (size_t i = 1; i < m; ++i) v[i] = 0.5 * (u[i - 1] + u[i]);
        v[m] = 0.5 * u[m - 1];
    } else {
        v[0] = 0.0;
        for (size_t i = 1; i <= m; ++i) v[i] = u[i - 1];
    }
    return v;
}

namespace {

// Convolution against precomputed interface values: c[h] = dx * sum_r
// weight[r] v[h - r], with v zero-extended. Reversed weights line up with
// ascending v indices for a contiguous inner product.
std::vector<double> convolve_interface_values(const KernelWeights& w,
                                              const std::vector<double>& v) {
    const long n_ifaces = static_cast<long>(v.size());
    std::vector<double> c(static_cast<size_t>(n_ifaces));
    for (long h = 0; h < n_ifaces; ++h) {
        const long m_lo = std::max<long>(0, h - w.p_hi);
        const long m_hi = std::min<long>(n_ifaces - 1, h - w.p_lo);
        if (m_lo > m_hi) {
            c[static_cast<size_t>(h)] = 0.0;
            continue;
        }
        const long t0 = w.p_hi - h + m_lo;  // index into weight_rev, >= 0
        c[static_cast<size_t>(h)] =
            w.dx * detail::dot(w.weight_rev.data() + t0,
                               v.data() + m_lo,
                               static_cast<size_t>(m_hi - m_lo + 1));
    }
    return c;
}

}  // namespace

std::vector<double> convolve(const KernelWeights& weights,
                             const std::vector<double>& u,
                             QuadratureRule rule) {
    return convolve_interface_values(weights, interface_values(u, rule));
}

WeightsMatrix build_weights_matrix(const ModelSpec& model, double dx) {
    const size_t n = static_cast<size_t>(model.n_components);
    std::map<const Kernel1D*, std::shared_ptr<const KernelWeights>> cache;
    WeightsMatrix matrix(n, std::vector<std::shared_ptr<const KernelWeights>>(n));
    for (size_t j = 0; j < n; ++j) {
        for (size_t k = 0; k < n; ++k) {
            const Kernel1D* key = model.kernel[j][k].get();
            auto it = cache.find(key);
            if (it == cache.end()) {
                it = cache.emplace(key,
                                   std::make_shared<const KernelWeights>(
                                       build_kernel_weights(*key, dx)))
                         .first;
            }
            matrix[j][k] = it->second;
        }
    }
    return matrix;
}

ConvolutionField convolution_field(const WeightsMatrix& weights,
                                   const std::vector<std::vector<double>>& u,
                                   QuadratureRule rule) {
    const size_t n = u.size();
    const long n_ifaces = static_cast<long>(u[0].size()) + 1;

    std::vector<std::vector<double>> v(n);
    for (size_t j = 0; j < n; ++j) v[j] = interface_values(u[j], rule);

    // Convolve each distinct (kernel, source component) pair once.
    std::map<std::pair<const KernelWeights*, size_t>, std::vector<double>>
        cache;
    ConvolutionField field;
    field.n_components = static_cast<int>(n);
    field.n_interfaces = n_ifaces;
    field.c.assign(n, std::vector<double>(static_cast<size_t>(n_ifaces) * n));
    for (size_t k = 0; k < n; ++k) {
        for (size_t j = 0; j < n; ++j) {
            const KernelWeights* w = weights[j][k].get();
            auto key = std::make_pair(w, j);
            auto it = cache.find(key);
            if (it == cache.end()) {
                it = cache.emplace(key, convolve_interface_values(*w, v[j]))
                         .first;
            }
            const std::vector<double>& cjk = it->second;
            for (long h = 0; h < n_ifaces; ++h) {
                field.c[k][static_cast<size_t>(h) * n + j] =
                    cjk[static_cast<size_t>(h)];
            }
        }
    }
    return field;
}

double convolution_first_difference_excess(const ConvolutionField& field,
                                           double bound_k1, double dx) {
    const int n = field.n_components;
    double excess = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const std::vector<double>& c = field.c[static_cast<size_t>(k)];
        for (long h = 1; h < field.n_interfaces; ++h) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                sum += std::abs(c[static_cast<size_t>(h) * n + j] -
                                c[static_cast<size_t>(h - 1) * n + j]);
            }
            excess = std::max(excess, sum - bound_k1 * dx);
        }
    }
    return excess;
}

double convolution_second_difference_excess(const ConvolutionField& field,
                                            double bound_k2, double dx) {
    const int n = field.n_components;
    double excess = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const std::vector<double>& c = field.c[static_cast<size_t>(k)];
        for (long h = 1; h + 1 < field.n_interfaces; ++h) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                sum += std::abs(c[static_cast<size_t>(h + 1) * n + j] -
                                2.0 * c[static_cast<size_t>(h) * n + j] +
                                c[static_cast<size_t>(h - 1) * n + j]);
            }
            excess = std::max(excess, sum - bound_k2 * dx * dx);
        }
    }
    return excess;
}

double increment_bound_k1(const ModelSpec& model,
                          const std::vector<double>& l1_norms) {
    double bound = 0.0;
    const size_t n = static_cast<size_t>(model.n_components);
    for (size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (size_t j = 0; j < n; ++j)
            sum += model.kernel[j][k]->sup_deriv1 * l1_norms[j];
        bound = std::max(bound, sum);
    }
    return bound;
}

double increment_bound_k2(const ModelSpec& model,
                          const std::vector<double>& l1_norms) {
    double bound = 0.0;
    const size_t n = static_cast<size_t>(model.n_components);
    for (size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (size_t j = 0; j < n; ++j)
            sum += 2.0 * model.kernel[j][k]->sup_deriv2 * l1_norms[j];
        bound = std::max(bound, sum);
    }
    return bound;
}

}  // namespace nlfv
