#ifndef NLFV_DETAIL_DOT_HPP
#define NLFV_DETAIL_DOT_HPP

#include <cstddef>

namespace nlfv::detail {

// Fixed-order inner product with eight independent accumulators. The lane
// split makes the loop vectorizable under strict IEEE semantics while
// keeping one well-defined summation order, so results are reproducible
// run to run.
inline double dot(const double* w, const double* v, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double a4 = 0.0, a5 = 0.0, a6 = 0.0, a7 = 0.0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 += w[i] * v[i];
        a1 += w[i + 1] * v[i + 1];
        a2 += w[i + 2] * v[i + 2];
        a3 += w[i + 3] * v[i + 3];
        a4 += w[i + 4] * v[i + 4];
        a5 += w[i + 5] * v[i + 5];
        a6 += w[i + 6] * v[i + 6];
        a7 += w[i + 7] * v[i + 7];
    }
    for (; i < n; ++i) a0 += w[i] * v[i];
    return ((a0 + a1) + (a2 + a3)) + ((a4 + a5) + (a6 + a7));
}

}  // namespace nlfv::detail

#endif
