#ifndef NLFV_GRID_HPP
#define NLFV_GRID_HPP

#include <cmath>
#include <cstdint>

#include "nlfv/errors.hpp"

namespace nlfv {

// Uniform 1D cell grid. Cell i spans [x_left + i*dx, x_left + (i+1)*dx);
// interfaces are indexed h = 0..n_cells with interface h at x_left + h*dx,
// so interface h separates cell h-1 from cell h. Interface-tiled cells nest
// exactly under 2:1 refinement, which the error metric relies on.
struct Grid1D {
    double x_left = 0.0;
    double x_right = 1.0;
    long n_cells = 0;

    Grid1D() = default;
    Grid1D(double xl, double xr, long n) : x_left(xl), x_right(xr), n_cells(n) {
        if (!(xr > xl) || n <= 0)
            throw ConfigError("grid: require x_right > x_left and n_cells > 0");
    }

    double dx() const { return (x_right - x_left) / static_cast<double>(n_cells); }
    double center(long i) const { return x_left + (static_cast<double>(i) + 0.5) * dx(); }
    double interface(long h) const { return x_left + static_cast<double>(h) * dx(); }
};

// Uniform 2D cell grid with square cells (dx == dy enforced). Cell (i,j)
// spans [x_left + i*dx, ...) x [y_left + j*dx, ...); x-interfaces carry index
// h = 0..nx, y-interfaces index g = 0..ny, same convention as Grid1D per axis.
struct Grid2D {
    double x_left = 0.0, x_right = 1.0;
    double y_left = 0.0, y_right = 1.0;
    long nx = 0, ny = 0;

    Grid2D() = default;
    Grid2D(double xl, double xr, double yl, double yr, long nx_, long ny_)
        : x_left(xl), x_right(xr), y_left(yl), y_right(yr), nx(nx_), ny(ny_) {
        if (!(xr > xl) || !(yr > yl) || nx_ <= 0 || ny_ <= 0)
            throw ConfigError("grid: require positive extents and cell counts");
        const double hx = (xr - xl) / static_cast<double>(nx_);
        const double hy = (yr - yl) / static_cast<double>(ny_);
        if (std::abs(hx - hy) > 1e-12 * std::abs(hx))
            throw ConfigError("grid: cells must be square (dx == dy)");
    }

    double dx() const { return (x_right - x_left) / static_cast<double>(nx); }
    double xcenter(long i) const { return x_left + (static_cast<double>(i) + 0.5) * dx(); }
    double ycenter(long j) const { return y_left + (static_cast<double>(j) + 0.5) * dx(); }
    double xinterface(long h) const { return x_left + static_cast<double>(h) * dx(); }
    double yinterface(long g) const { return y_left + static_cast<double>(g) * dx(); }
};

}  // namespace nlfv

#endif
