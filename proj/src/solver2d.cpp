#include "nlfv/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "nlfv/detail/dot.hpp"
#include "nlfv/fft.hpp"

namespace nlfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stable_sum_abs(const std::vector<double>& values) {
    long double sum = 0.0L;
    for (double v : values) sum += std::abs(static_cast<long double>(v));
    return static_cast<double>(sum);
}

// One sweep family of sample rows on the circle footprint: for row offset s
// the x offsets r with sample inside the disk, trimmed to the nonzero span.
std::vector<KernelWeights2D::Row> sample_rows(
    const Kernel2D& kernel, double dx, bool half_shift_x, long* s_lo_out,
    double* mass_out) {
    const double radius = kernel.radius;
    const double shift_x = half_shift_x ? 0.5 : 0.0;
    const double shift_y = half_shift_x ? 0.0 : 0.5;

    const long s_max = static_cast<long>(
        std::floor(radius / dx - shift_y + 1e-12));
    const long s_min = static_cast<long>(
        std::ceil(-radius / dx - shift_y - 1e-12));

    std::vector<KernelWeights2D::Row> rows;
    long s_lo = 0;
    double mass = 0.0;
    bool any = false;
    for (long s = s_min; s <= s_max; ++s) {
        const double y = (static_cast<double>(s) + shift_y) * dx;
        const double half2 = radius * radius - y * y;
        if (half2 <= 0.0) continue;
        const double half = std::sqrt(half2);
        const long r_min = static_cast<long>(
            std::ceil(-half / dx - shift_x - 1e-12));
        const long r_max = static_cast<long>(
            std::floor(half / dx - shift_x + 1e-12));
        if (r_max < r_min) continue;

        std::vector<double> values;
        values.reserve(static_cast<size_t>(r_max - r_min + 1));
        for (long r = r_min; r <= r_max; ++r) {
            values.push_back(kernel.density(
                (static_cast<double>(r) + shift_x) * dx, y));
        }
        long first = 0;
        long last = static_cast<long>(values.size()) - 1;
        while (first <= last && values[static_cast<size_t>(first)] == 0.0)
            ++first;
        while (last >= first && values[static_cast<size_t>(last)] == 0.0)
            --last;
        if (first > last) continue;

        KernelWeights2D::Row row;
        row.r_lo = r_min + first;
        row.r_hi = r_min + last;
        // Reversed order: w[t] belongs to offset r = r_hi - t, so ascending
        // t walks ascending source-cell indices.
        for (long r = row.r_hi; r >= row.r_lo; --r) {
            const double w = values[static_cast<size_t>(r - r_min)];
            row.w.push_back(w);
            mass += w;
        }
        if (!any) {
            s_lo = s;
            any = true;
        }
        while (static_cast<long>(rows.size()) < s - s_lo) {
            rows.push_back({});  // interior all-zero row keeps indexing dense
        }
        rows.push_back(std::move(row));
    }
    if (!any) {
        throw InsufficientResolution(
            "grid spacing " + std::to_string(dx) +
            " samples the disk kernel as identically zero");
    }
    *s_lo_out = s_lo;
    *mass_out = mass * dx * dx;
    return rows;
}

long reach_cells(const KernelWeights2D& w) {
    long reach = 0;
    auto scan = [&reach](const std::vector<KernelWeights2D::Row>& rows,
                         long s_lo) {
        for (size_t idx = 0; idx < rows.size(); ++idx) {
            const long s = s_lo + static_cast<long>(idx);
            reach = std::max({reach, std::labs(s) + 1,
                              std::labs(rows[idx].r_lo),
                              std::labs(rows[idx].r_hi) + 1});
        }
    };
    scan(w.xrows, w.sx_lo);
    scan(w.yrows, w.sy_lo);
    return reach;
}

StepDiagnostics2D measure_state_2d(const SystemState2D& state) {
    StepDiagnostics2D diag;
    diag.t = state.t;
    diag.dt = 0.0;
    diag.min_value = kInf;
    const double cell = state.grid.dx() * state.grid.dx();
    for (const auto& u : state.u) {
        double linf = 0.0;
        for (double v : u) {
            diag.min_value = std::min(diag.min_value, v);
            linf = std::max(linf, std::abs(v));
        }
        diag.l1.push_back(cell * stable_sum_abs(u));
        diag.linf.push_back(linf);
    }
    return diag;
}

double state_sup_2d(const SystemState2D& state) {
    double sup = 0.0;
    for (const auto& u : state.u)
        for (double v : u) sup = std::max(sup, std::abs(v));
    return sup;
}

void require_unit_coefficient(const ModelSpec& model) {
    for (const Component& comp : model.comp) {
        if (comp.sigma.inf != 1.0 || comp.sigma.sup != 1.0 ||
            comp.sigma.tv != 0.0) {
            throw ConfigError(
                "the 2D scheme requires a unit coefficient in every "
                "component");
        }
    }
}

}  // namespace

namespace {

void require_resolvable(const Kernel2D& kernel, double dx) {
    if (!(dx > 0.0)) throw ConfigError("kernel sampling needs dx > 0");
    if (!(dx <= kernel.radius / 2.0)) {
        throw InsufficientResolution(
            "grid spacing " + std::to_string(dx) +
            " exceeds half the kernel radius " +
            std::to_string(kernel.radius));
    }
}

// The x-sweep samples the kernel driving the first-direction velocity, the
// y-sweep the one driving the second direction; the two may differ.
KernelWeights2D build_combined_weights(const Kernel2D& xk, const Kernel2D& yk,
                                       double dx) {
    require_resolvable(xk, dx);
    require_resolvable(yk, dx);
    KernelWeights2D weights;
    weights.dx = dx;
    weights.xrows = sample_rows(xk, dx, /*half_shift_x=*/true,
                                &weights.sx_lo, &weights.mass_x);
    weights.yrows = sample_rows(yk, dx, /*half_shift_x=*/false,
                                &weights.sy_lo, &weights.mass_y);
    return weights;
}

}  // namespace

KernelWeights2D build_kernel_weights_2d(const Kernel2D& kernel, double dx) {
    return build_combined_weights(kernel, kernel, dx);
}

WeightsMatrix2D build_weights_matrix_2d(const ModelSpec& model, double dx) {
    const size_t n = static_cast<size_t>(model.n_components);
    std::map<std::pair<const Kernel2D*, const Kernel2D*>,
             std::shared_ptr<const KernelWeights2D>>
        cache;
    auto resolve = [&cache, dx](const std::shared_ptr<const Kernel2D>& xk,
                                const std::shared_ptr<const Kernel2D>& yk) {
        auto key = std::make_pair(xk.get(), yk.get());
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key,
                               std::make_shared<const KernelWeights2D>(
                                   build_combined_weights(*xk, *yk, dx)))
                     .first;
        }
        return it->second;
    };
    WeightsMatrix2D matrix(
        n, std::vector<std::shared_ptr<const KernelWeights2D>>(n));
    for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k)
            matrix[j][k] = resolve(model.kernel2d[j][k],
                                   model.kernel2d_y[j][k]);
    return matrix;
}

ConvolutionField2D convolution_field_2d(
    const WeightsMatrix2D& weights,
    const std::vector<std::vector<double>>& u, long nx, long ny) {
    const size_t n = u.size();
    const double dx = weights[0][0]->dx;
    const double cell = dx * dx;

    // c at the vertical interface (h, jy) from the x-sweep rows:
    //   sum_s sum_r w[s][r] u[jy - s][h - 1 - r]
    auto sweep_x = [&](const KernelWeights2D& w,
                       const std::vector<double>& src) {
        std::vector<double> out(static_cast<size_t>((nx + 1) * ny), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long jy = 0; jy < ny; ++jy) {
            for (long h = 0; h <= nx; ++h) {
                double acc = 0.0;
                for (size_t idx = 0; idx < w.xrows.size(); ++idx) {
                    const KernelWeights2D::Row& row = w.xrows[idx];
                    if (row.w.empty()) continue;
                    const long q = jy - (w.sx_lo + static_cast<long>(idx));
                    if (q < 0 || q >= ny) continue;
                    const long p_first = h - 1 - row.r_hi;
                    const long p_lo = std::max<long>(0, p_first);
                    const long p_hi = std::min<long>(nx - 1, h - 1 - row.r_lo);
                    if (p_lo > p_hi) continue;
                    acc += detail::dot(
                        row.w.data() + (p_lo - p_first),
                        src.data() + q * nx + p_lo,
                        static_cast<size_t>(p_hi - p_lo + 1));
                }
                out[static_cast<size_t>(jy * (nx + 1) + h)] = cell * acc;
            }
        }
        return out;
    };

    // c at the horizontal interface (ix, g) from the y-sweep rows:
    //   sum_s sum_r w[s][r] u[g - 1 - s][ix - r]
    auto sweep_y = [&](const KernelWeights2D& w,
                       const std::vector<double>& src) {
        std::vector<double> out(static_cast<size_t>(nx * (ny + 1)), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long g = 0; g <= ny; ++g) {
            for (long ix = 0; ix < nx; ++ix) {
                double acc = 0.0;
                for (size_t idx = 0; idx < w.yrows.size(); ++idx) {
                    const KernelWeights2D::Row& row = w.yrows[idx];
                    if (row.w.empty()) continue;
                    const long q = g - 1 - (w.sy_lo + static_cast<long>(idx));
                    if (q < 0 || q >= ny) continue;
                    const long p_first = ix - row.r_hi;
                    const long p_lo = std::max<long>(0, p_first);
                    const long p_hi = std::min<long>(nx - 1, ix - row.r_lo);
                    if (p_lo > p_hi) continue;
                    acc += detail::dot(
                        row.w.data() + (p_lo - p_first),
                        src.data() + q * nx + p_lo,
                        static_cast<size_t>(p_hi - p_lo + 1));
                }
                out[static_cast<size_t>(g * nx + ix)] = cell * acc;
            }
        }
        return out;
    };

    std::map<std::pair<const KernelWeights2D*, size_t>, std::vector<double>>
        cache_x;
    std::map<std::pair<const KernelWeights2D*, size_t>, std::vector<double>>
        cache_y;

    ConvolutionField2D field;
    field.n_components = static_cast<int>(n);
    field.nx = nx;
    field.ny = ny;
    field.cx.assign(n,
                    std::vector<double>(static_cast<size_t>((nx + 1) * ny) *
                                        n));
    field.cy.assign(n,
                    std::vector<double>(static_cast<size_t>(nx * (ny + 1)) *
                                        n));
    for (size_t k = 0; k < n; ++k) {
        for (size_t j = 0; j < n; ++j) {
            const KernelWeights2D* w = weights[j][k].get();
            auto key = std::make_pair(w, j);
            auto itx = cache_x.find(key);
            if (itx == cache_x.end())
                itx = cache_x.emplace(key, sweep_x(*w, u[j])).first;
            auto ity = cache_y.find(key);
            if (ity == cache_y.end())
                ity = cache_y.emplace(key, sweep_y(*w, u[j])).first;
            const std::vector<double>& cx = itx->second;
            const std::vector<double>& cy = ity->second;
            for (size_t node = 0; node < cx.size(); ++node)
                field.cx[k][node * n + j] = cx[node];
            for (size_t node = 0; node < cy.size(); ++node)
                field.cy[k][node * n + j] = cy[node];
        }
    }
    return field;
}

namespace {

// Offset footprint of one sweep family: row offsets s with their tap columns.
struct SweepSpan {
    long s_min = 0;
    long s_max = 0;
    long r_min = 0;
    long r_max = 0;
    double taps = 0.0;
    bool any = false;
};

SweepSpan measure_rows(const std::vector<KernelWeights2D::Row>& rows,
                       long s_lo) {
    SweepSpan span;
    for (size_t idx = 0; idx < rows.size(); ++idx) {
        const KernelWeights2D::Row& row = rows[idx];
        if (row.w.empty()) continue;
        const long s = s_lo + static_cast<long>(idx);
        if (!span.any) {
            span.s_min = span.s_max = s;
            span.r_min = row.r_lo;
            span.r_max = row.r_hi;
            span.any = true;
        } else {
            span.s_min = std::min(span.s_min, s);
            span.s_max = std::max(span.s_max, s);
            span.r_min = std::min(span.r_min, row.r_lo);
            span.r_max = std::max(span.r_max, row.r_hi);
        }
        span.taps += static_cast<double>(row.w.size());
    }
    return span;
}

size_t wrap(long value, size_t period) {
    const long p = static_cast<long>(period);
    long m = value % p;
    if (m < 0) m += p;
    return static_cast<size_t>(m);
}

// Kernel taps scattered onto the padded torus, transformed once. Convolving
// the padded cell field with this spectrum reproduces the direct sweep sums
// because the padding keeps every read index on a unique residue.
std::vector<std::complex<double>> kernel_spectrum(
    const std::vector<KernelWeights2D::Row>& rows, long s_lo, size_t rows_p,
    size_t cols_p) {
    std::vector<std::complex<double>> buf(rows_p * cols_p);
    for (size_t idx = 0; idx < rows.size(); ++idx) {
        const KernelWeights2D::Row& row = rows[idx];
        if (row.w.empty()) continue;
        const long s = s_lo + static_cast<long>(idx);
        const size_t base = wrap(s, rows_p) * cols_p;
        for (size_t t = 0; t < row.w.size(); ++t) {
            const long r = row.r_hi - static_cast<long>(t);
            buf[base + wrap(r, cols_p)] += row.w[t];
        }
    }
    fft::transform_2d(buf, rows_p, cols_p, /*inverse=*/false);
    return buf;
}

}  // namespace

struct Conv2DEngine::Impl {
    const WeightsMatrix2D* weights = nullptr;
    long nx = 0;
    long ny = 0;
    bool use_fft = false;
    size_t rows_p = 0;
    size_t cols_p = 0;

    std::vector<const KernelWeights2D*> uniques;
    std::vector<std::vector<std::complex<double>>> kspec_x;
    std::vector<std::vector<std::complex<double>>> kspec_y;

    mutable std::vector<std::complex<double>> scratch;
    mutable std::vector<std::vector<std::complex<double>>> uspec;

    size_t unique_index(const KernelWeights2D* w) const {
        for (size_t i = 0; i < uniques.size(); ++i)
            if (uniques[i] == w) return i;
        return uniques.size();
    }
};

Conv2DEngine::Conv2DEngine(const WeightsMatrix2D& weights, long nx, long ny,
                           Conv2DStrategy strategy)
    : impl_(std::make_unique<Impl>()) {
    impl_->weights = &weights;
    impl_->nx = nx;
    impl_->ny = ny;

    const size_t n = weights.size();
    for (const auto& row : weights) {
        for (const auto& w : row) {
            if (impl_->unique_index(w.get()) == impl_->uniques.size())
                impl_->uniques.push_back(w.get());
        }
    }

    long s_lo = 0;
    long s_hi = 0;
    long r_lo = 0;
    long r_hi = 0;
    for (const KernelWeights2D* w : impl_->uniques) {
        for (const SweepSpan& span : {measure_rows(w->xrows, w->sx_lo),
                                      measure_rows(w->yrows, w->sy_lo)}) {
            if (!span.any) continue;
            s_lo = std::min(s_lo, span.s_min);
            s_hi = std::max(s_hi, span.s_max);
            r_lo = std::min(r_lo, span.r_min);
            r_hi = std::max(r_hi, span.r_max);
        }
    }
    // Unique-residue padding: the linear outputs span ny + (s_hi - s_lo)
    // rows, and the reads in [-1, ny] must not collide with them modulo the
    // period, which needs period >= ny + s_hi + 2 and >= ny - s_lo + 2.
    impl_->rows_p = fft::next_pow2(static_cast<size_t>(
        ny + std::max({s_hi - s_lo, s_hi, -s_lo}) + 2));
    impl_->cols_p = fft::next_pow2(static_cast<size_t>(
        nx + std::max({r_hi - r_lo, r_hi, -r_lo}) + 2));

    // Count the distinct sweep evaluations one field call performs, the same
    // dedup the direct path applies.
    std::set<std::pair<const KernelWeights2D*, size_t>> pairs;
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j)
            pairs.insert({weights[j][k].get(), j});

    double direct_ops = 0.0;
    for (const auto& pair : pairs) {
        const KernelWeights2D* w = pair.first;
        direct_ops += measure_rows(w->xrows, w->sx_lo).taps *
                      static_cast<double>((nx + 1) * ny);
        direct_ops += measure_rows(w->yrows, w->sy_lo).taps *
                      static_cast<double>(nx * (ny + 1));
    }
    const double cells_p =
        static_cast<double>(impl_->rows_p) * static_cast<double>(impl_->cols_p);
    const double fft_cost =
        10.0 * cells_p *
        std::log2(std::max(2.0, cells_p));
    const double spectral_ops =
        (static_cast<double>(n) + 2.0 * static_cast<double>(pairs.size())) *
        fft_cost;

    switch (strategy) {
        case Conv2DStrategy::direct:
            impl_->use_fft = false;
            break;
        case Conv2DStrategy::spectral:
            impl_->use_fft = true;
            break;
        case Conv2DStrategy::auto_select:
            impl_->use_fft = spectral_ops < direct_ops;
            break;
    }

    if (impl_->use_fft) {
        for (const KernelWeights2D* w : impl_->uniques) {
            impl_->kspec_x.push_back(kernel_spectrum(
                w->xrows, w->sx_lo, impl_->rows_p, impl_->cols_p));
            impl_->kspec_y.push_back(kernel_spectrum(
                w->yrows, w->sy_lo, impl_->rows_p, impl_->cols_p));
        }
    }
}

Conv2DEngine::~Conv2DEngine() = default;
Conv2DEngine::Conv2DEngine(Conv2DEngine&&) noexcept = default;
Conv2DEngine& Conv2DEngine::operator=(Conv2DEngine&&) noexcept = default;

bool Conv2DEngine::spectral() const { return impl_->use_fft; }

ConvolutionField2D Conv2DEngine::field(
    const std::vector<std::vector<double>>& u) const {
    const Impl& im = *impl_;
    if (!im.use_fft)
        return convolution_field_2d(*im.weights, u, im.nx, im.ny);

    const size_t n = u.size();
    const long nx = im.nx;
    const long ny = im.ny;
    const size_t rows_p = im.rows_p;
    const size_t cols_p = im.cols_p;
    const double dx = (*im.weights)[0][0]->dx;
    const double cell = dx * dx;

    // Forward spectrum of every component once per call.
    im.uspec.assign(n, {});
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::complex<double>>& spec = im.uspec[j];
        spec.assign(rows_p * cols_p, {});
        for (long jy = 0; jy < ny; ++jy) {
            const double* src = u[j].data() + jy * nx;
            std::complex<double>* dst =
                spec.data() + static_cast<size_t>(jy) * cols_p;
            for (long ix = 0; ix < nx; ++ix) dst[ix] = src[ix];
        }
        fft::transform_2d(spec, rows_p, cols_p, /*inverse=*/false);
    }

    // The direct path evaluates c at the vertical interface (h, jy) as the
    // padded convolution read at row jy, column h - 1, and at the horizontal
    // interface (ix, g) as row g - 1, column ix. Negative reads wrap.
    auto extract_x = [&](std::vector<double>& out) {
        out.resize(static_cast<size_t>((nx + 1) * ny));
        for (long jy = 0; jy < ny; ++jy) {
            const std::complex<double>* row =
                im.scratch.data() + static_cast<size_t>(jy) * cols_p;
            double* dst = out.data() + static_cast<size_t>(jy) * (nx + 1);
            dst[0] = cell * row[cols_p - 1].real();
            for (long h = 1; h <= nx; ++h)
                dst[h] = cell * row[static_cast<size_t>(h - 1)].real();
        }
    };
    auto extract_y = [&](std::vector<double>& out) {
        out.resize(static_cast<size_t>(nx * (ny + 1)));
        for (long g = 0; g <= ny; ++g) {
            const size_t src_row = (g == 0) ? rows_p - 1
                                            : static_cast<size_t>(g - 1);
            const std::complex<double>* row =
                im.scratch.data() + src_row * cols_p;
            double* dst = out.data() + static_cast<size_t>(g) * nx;
            for (long ix = 0; ix < nx; ++ix)
                dst[ix] = cell * row[static_cast<size_t>(ix)].real();
        }
    };

    auto inverse_of_product = [&](const std::vector<std::complex<double>>& ks,
                                  const std::vector<std::complex<double>>& us) {
        im.scratch.resize(rows_p * cols_p);
        for (size_t m = 0; m < im.scratch.size(); ++m)
            im.scratch[m] = ks[m] * us[m];
        fft::transform_2d(im.scratch, rows_p, cols_p, /*inverse=*/true);
    };

    std::map<std::pair<size_t, size_t>, std::vector<double>> cache_x;
    std::map<std::pair<size_t, size_t>, std::vector<double>> cache_y;

    ConvolutionField2D field;
    field.n_components = static_cast<int>(n);
    field.nx = nx;
    field.ny = ny;
    field.cx.assign(n, std::vector<double>(
                           static_cast<size_t>((nx + 1) * ny) * n));
    field.cy.assign(n, std::vector<double>(
                           static_cast<size_t>(nx * (ny + 1)) * n));
    for (size_t k = 0; k < n; ++k) {
        for (size_t j = 0; j < n; ++j) {
            const KernelWeights2D* w = (*im.weights)[j][k].get();
            const size_t uid = im.unique_index(w);
            const auto key = std::make_pair(uid, j);
            auto itx = cache_x.find(key);
            if (itx == cache_x.end()) {
                inverse_of_product(im.kspec_x[uid], im.uspec[j]);
                itx = cache_x.emplace(key, std::vector<double>{}).first;
                extract_x(itx->second);
            }
            auto ity = cache_y.find(key);
            if (ity == cache_y.end()) {
                inverse_of_product(im.kspec_y[uid], im.uspec[j]);
                ity = cache_y.emplace(key, std::vector<double>{}).first;
                extract_y(ity->second);
            }
            const std::vector<double>& cx = itx->second;
            const std::vector<double>& cy = ity->second;
            for (size_t node = 0; node < cx.size(); ++node)
                field.cx[k][node * n + j] = cx[node];
            for (size_t node = 0; node < cy.size(); ++node)
                field.cy[k][node * n + j] = cy[node];
        }
    }
    return field;
}

SystemState2D project_initial_data_2d(const ModelSpec& model,
                                      const Grid2D& grid) {
    if (model.dimension != 2)
        throw ConfigError("2D projection needs a 2D model");
    SystemState2D state;
    state.grid = grid;
    state.n_components = model.n_components;
    const double dx = grid.dx();
    const size_t n = static_cast<size_t>(model.n_components);
    state.u.assign(n, std::vector<double>(
                          static_cast<size_t>(grid.nx * grid.ny)));
    for (size_t k = 0; k < n; ++k) {
        const InitialData2D& data = model.initial2d[k];
        for (long jy = 0; jy < grid.ny; ++jy) {
            const double ay = grid.yinterface(jy);
            for (long ix = 0; ix < grid.nx; ++ix) {
                const double ax = grid.xinterface(ix);
                double value;
                if (data.average) {
                    value = data.average(ax, ax + dx, ay, ay + dx);
                } else {
                    // 8x8 midpoint fallback for data without a closed-form
                    // cell mean.
                    double sum = 0.0;
                    for (int a = 0; a < 8; ++a)
                        for (int b = 0; b < 8; ++b)
                            sum += data.value(
                                ax + (a + 0.5) * dx / 8.0,
                                ay + (b + 0.5) * dx / 8.0);
                    value = sum / 64.0;
                }
                state.u[k][static_cast<size_t>(jy * grid.nx + ix)] = value;
            }
        }
    }
    return state;
}

namespace {

StepDiagnostics2D step_with_field(SystemState2D& state, const ModelSpec& model,
                                  const SchemeConfig& scheme,
                                  const ConvolutionField2D& field, double dt) {
    const double dx = state.grid.dx();
    const double lambda = dt / dx;
    const long nx = state.grid.nx;
    const long ny = state.grid.ny;
    const int n = state.n_components;

    StepDiagnostics2D diag;
    diag.t = state.t + dt;
    diag.dt = dt;
    diag.min_value = kInf;

    std::vector<double> flux_x(static_cast<size_t>((nx + 1) * ny));
    std::vector<double> flux_y(static_cast<size_t>(nx * (ny + 1)));
    std::vector<double> fresh(static_cast<size_t>(nx * ny));

    for (int k = 0; k < n; ++k) {
        const Component& comp = model.comp[static_cast<size_t>(k)];
        auto& u = state.u[static_cast<size_t>(k)];
        const std::vector<double>& cx = field.cx[static_cast<size_t>(k)];
        const std::vector<double>& cy = field.cy[static_cast<size_t>(k)];

        // Vertical interfaces: outer walls carry no flux.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long jy = 0; jy < ny; ++jy) {
            flux_x[static_cast<size_t>(jy * (nx + 1))] = 0.0;
            flux_x[static_cast<size_t>(jy * (nx + 1) + nx)] = 0.0;
            for (long h = 1; h < nx; ++h) {
                const size_t node = static_cast<size_t>(jy * (nx + 1) + h);
                const double a = comp.velocity(std::span<const double>(
                    cx.data() + node * n, static_cast<size_t>(n)));
                flux_x[node] = numerical_flux(
                    comp, scheme, lambda, a,
                    u[static_cast<size_t>(jy * nx + h - 1)],
                    u[static_cast<size_t>(jy * nx + h)]);
            }
        }

        // Horizontal interfaces.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long g = 0; g <= ny; ++g) {
            for (long ix = 0; ix < nx; ++ix) {
                const size_t node = static_cast<size_t>(g * nx + ix);
                if (g == 0 || g == ny) {
                    flux_y[node] = 0.0;
                    continue;
                }
                const double a = comp.velocity_y(std::span<const double>(
                    cy.data() + node * n, static_cast<size_t>(n)));
                flux_y[node] = numerical_flux_y(
                    comp, scheme, lambda, a,
                    u[static_cast<size_t>((g - 1) * nx + ix)],
                    u[static_cast<size_t>(g * nx + ix)]);
            }
        }

        double linf = 0.0;
        double min_value = kInf;
        for (long jy = 0; jy < ny; ++jy) {
            for (long ix = 0; ix < nx; ++ix) {
                const size_t cell = static_cast<size_t>(jy * nx + ix);
                const double next =
                    u[cell] -
                    lambda *
                        (flux_x[static_cast<size_t>(jy * (nx + 1) + ix + 1)] -
                         flux_x[static_cast<size_t>(jy * (nx + 1) + ix)]) -
                    lambda * (flux_y[static_cast<size_t>((jy + 1) * nx + ix)] -
                              flux_y[static_cast<size_t>(jy * nx + ix)]);
                if (!std::isfinite(next)) {
                    throw NonFiniteState(
                        "non-finite value in component " + std::to_string(k) +
                        ", cell (" + std::to_string(ix) + ", " +
                        std::to_string(jy) + "), step " +
                        std::to_string(state.step_index + 1));
                }
                fresh[cell] = next;
                min_value = std::min(min_value, next);
                linf = std::max(linf, std::abs(next));
            }
        }
        u.swap(fresh);
        diag.min_value = std::min(diag.min_value, min_value);
        diag.l1.push_back(dx * dx * stable_sum_abs(u));
        diag.linf.push_back(linf);
    }

    state.t += dt;
    state.step_index += 1;
    return diag;
}

}  // namespace

StepDiagnostics2D step_2d(SystemState2D& state, const ModelSpec& model,
                          const SchemeConfig& scheme,
                          const WeightsMatrix2D& weights, double dt) {
    const ConvolutionField2D field = convolution_field_2d(
        weights, state.u, state.grid.nx, state.grid.ny);
    return step_with_field(state, model, scheme, field, dt);
}

StepDiagnostics2D step_2d(SystemState2D& state, const ModelSpec& model,
                          const SchemeConfig& scheme,
                          const Conv2DEngine& engine, double dt) {
    const ConvolutionField2D field = engine.field(state.u);
    return step_with_field(state, model, scheme, field, dt);
}

RunResult2D run_2d(const ModelSpec& model, const Grid2D& grid,
                   const SchemeConfig& scheme, double t_end,
                   const RunOptions2D& options) {
    validate_model(model);
    if (model.dimension != 2) throw ConfigError("2D run needs a 2D model");
    require_unit_coefficient(model);
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(scheme.cfl_safety > 0.0) || scheme.cfl_safety > 1.0)
        throw ConfigError("cfl_safety must lie in (0, 1]");

    const double dx = grid.dx();
    const WeightsMatrix2D weights = build_weights_matrix_2d(model, dx);
    const Conv2DEngine engine(weights, grid.nx, grid.ny);
    const double lambda =
        scheme.cfl_safety * max_stable_lambda_2d(model, scheme);
    const double dt = lambda * dx;

    RunResult2D result;
    result.state = project_initial_data_2d(model, grid);
    result.lambda = lambda;
    result.dt = dt;

    const double sup0 = state_sup_2d(result.state);
    long window = 0;
    for (const auto& row : weights)
        for (const auto& w : row) window = std::max(window, reach_cells(*w));
    window += 1;

    const double clear_tol = 1e-13 * std::max(1.0, sup0);
    const double ring_tol = 1e-3 * std::max(1.0, sup0);
    const long nx = grid.nx;
    const long ny = grid.ny;

    auto frame_max = [&](long depth) {
        double value = 0.0;
        for (const auto& u : result.state.u) {
            for (long jy = 0; jy < ny; ++jy) {
                for (long ix = 0; ix < nx; ++ix) {
                    const bool edge = ix < depth || ix >= nx - depth ||
                                      jy < depth || jy >= ny - depth;
                    if (!edge) continue;
                    value = std::max(
                        value,
                        std::abs(u[static_cast<size_t>(jy * nx + ix)]));
                }
            }
        }
        return value;
    };

    if (options.check_support && frame_max(std::min(window, nx)) > clear_tol) {
        throw SupportClipped(
            "initial data reaches within one kernel radius of the domain "
            "boundary; enlarge the domain");
    }

    result.series.push_back(measure_state_2d(result.state));

    // Sup-norm growth exponent: per direction, the convolution increment
    // constant times the flux and velocity Lipschitz constants.
    double k1x = 0.0;
    double k1y = 0.0;
    const size_t n = static_cast<size_t>(model.n_components);
    for (size_t k = 0; k < n; ++k) {
        double sx = 0.0;
        double sy = 0.0;
        for (size_t j = 0; j < n; ++j) {
            sx += model.kernel2d[j][k]->sup_grad_x *
                  result.series.front().l1[j];
            sy += model.kernel2d_y[j][k]->sup_grad_y *
                  result.series.front().l1[j];
        }
        k1x = std::max(k1x, sx);
        k1y = std::max(k1y, sy);
    }
    double rate = 0.0;
    for (const Component& comp : model.comp) {
        rate = std::max(rate, comp.lip_flux * comp.lip_velocity * k1x +
                                  comp.lip_flux_y * comp.lip_velocity_y * k1y);
    }
    result.sup_growth_rate = rate;

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
    if (want_initial_snapshot && options.on_snapshot)
        options.on_snapshot(result.state);

    for (double stop : stop_set) {
        const double span = stop - result.state.t;
        long n_steps = static_cast<long>(std::ceil(span / dt - 1e-9));
        if (n_steps < 1) n_steps = 1;
        for (long s = 0; s < n_steps; ++s) {
            const bool closing = (s == n_steps - 1);
            const double dt_step = closing ? (stop - result.state.t) : dt;
            StepDiagnostics2D diag =
                step_2d(result.state, model, scheme, engine, dt_step);
            if (closing) {
                result.state.t = stop;
                diag.t = stop;
            }
            if (options.check_support && frame_max(1) > ring_tol) {
                throw SupportClipped(
                    "state reached the domain boundary at step " +
                    std::to_string(result.state.step_index) +
                    "; enlarge the domain or shorten the run");
            }
            result.series.push_back(std::move(diag));
        }
        if (options.on_snapshot &&
            std::any_of(options.snapshot_times.begin(),
                        options.snapshot_times.end(),
                        [&](double s2) { return std::abs(s2 - stop) <= t_tol; }))
            options.on_snapshot(result.state);
    }

    result.n_steps = static_cast<long>(result.series.size()) - 1;
    return result;
}

MonitorReport check_stability_monitors_2d(const ModelSpec& model,
                                          const RunResult2D& result) {
    (void)model;
    MonitorReport report;
    report.bounds.k3 = result.sup_growth_rate;
    const StepDiagnostics2D& start = result.series.front();
    const int n = static_cast<int>(start.l1.size());
    const double log_slack = std::log1p(1e-9);

    auto record = [&report](const std::string& item, long step, double margin,
                            const std::string& detail) {
        report.passed = false;
        report.findings.push_back({item, step, margin, detail});
    };

    report.min_value = kInf;
    double worst_mass = 0.0;
    long worst_mass_step = -1;
    double worst_sup = -kInf;
    long worst_sup_step = -1;
    long worst_positivity_step = -1;

    for (size_t idx = 0; idx < result.series.size(); ++idx) {
        const StepDiagnostics2D& diag = result.series[idx];
        const long step_no = static_cast<long>(idx);
        if (diag.min_value < report.min_value) {
            report.min_value = diag.min_value;
            worst_positivity_step = step_no;
        }
        for (int k = 0; k < n; ++k) {
            const double drift =
                std::abs(diag.l1[static_cast<size_t>(k)] -
                         start.l1[static_cast<size_t>(k)]) /
                std::max(start.l1[static_cast<size_t>(k)], 1e-300);
            if (drift > worst_mass) {
                worst_mass = drift;
                worst_mass_step = step_no;
            }
            const double linf0 = start.linf[static_cast<size_t>(k)];
            const double linf = diag.linf[static_cast<size_t>(k)];
            if (linf > 0.0 && linf0 > 0.0) {
                const double margin = std::log(linf) - std::log(linf0) -
                                      result.sup_growth_rate * diag.t;
                if (margin > worst_sup) {
                    worst_sup = margin;
                    worst_sup_step = step_no;
                }
            } else if (linf > 0.0 && linf0 == 0.0) {
                record("sup-bound", step_no, kInf,
                       "sup norm grew from exactly zero");
            }
        }
    }

    report.mass_drift_rel = worst_mass;
    report.sup_log_margin = worst_sup;

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
               "sup norm exceeded its exponential bound (log excess " +
                   std::to_string(worst_sup) + ")");
    }
    return report;
}

}  // namespace nlfv
