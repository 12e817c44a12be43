#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nlfv {
namespace fft {

// Smallest power of two that is >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

// In-place radix-2 transform of length n (a power of two). The inverse
// transform includes the 1/n normalization, so inverse(forward(a)) == a up
// to rounding.
void transform(std::complex<double>* a, std::size_t n, bool inverse);

// Row-major rows x cols buffer, both dimensions powers of two. Transforms
// every row, then every column, in place.
void transform_2d(std::vector<std::complex<double>>& a, std::size_t rows,
                  std::size_t cols, bool inverse);

}  // namespace fft
}  // namespace nlfv
