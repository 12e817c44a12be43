#include "nlfv/fft.hpp"

#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace nlfv {
namespace fft {

namespace {

// Forward-direction twiddle table for a given length: w[k] = exp(-2*pi*i*k/n)
// for k < n/2. Tables are tiny relative to the transforms that use them, so
// they are cached for the lifetime of the process.
const std::vector<std::complex<double>>& twiddles(std::size_t n) {
    static std::mutex guard;
    static std::unordered_map<std::size_t,
                              std::vector<std::complex<double>>> cache;
    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double phi = -2.0 * std::numbers::pi *
                           static_cast<double>(k) / static_cast<double>(n);
        w[k] = std::complex<double>(std::cos(phi), std::sin(phi));
    }
    return cache.emplace(n, std::move(w)).first->second;
}

void bit_reverse_permute(std::complex<double>* a, std::size_t n) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t bit = n >> 1;
        while (j & bit) {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void transform(std::complex<double>* a, std::size_t n, bool inverse) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("transform length must be a power of two");
    if (n == 1) return;

    bit_reverse_permute(a, n);
    const auto& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> tw = w[k * stride];
                if (inverse) tw = std::conj(tw);
                const std::complex<double> even = a[start + k];
                const std::complex<double> odd =
                    a[start + k + len / 2] * tw;
                a[start + k] = even + odd;
                a[start + k + len / 2] = even - odd;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) a[i] *= scale;
    }
}

void transform_2d(std::vector<std::complex<double>>& a, std::size_t rows,
                  std::size_t cols, bool inverse) {
    if (a.size() != rows * cols)
        throw std::invalid_argument("buffer does not match rows x cols");
    for (std::size_t r = 0; r < rows; ++r)
        transform(a.data() + r * cols, cols, inverse);

    std::vector<std::complex<double>> column(rows);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows; ++r) column[r] = a[r * cols + c];
        transform(column.data(), rows, inverse);
        for (std::size_t r = 0; r < rows; ++r) a[r * cols + c] = column[r];
    }
}

}  // namespace fft
}  // namespace nlfv
