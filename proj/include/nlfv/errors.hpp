#ifndef NLFV_ERRORS_HPP
#define NLFV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlfv {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configuration value is missing, malformed, or out of its admissible range.
class ConfigError : public Error {
public:
    using Error::Error;
};

// The grid spacing is too coarse to resolve a kernel support (no interface
// sample falls inside it, or a stated resolution precondition fails).
class InsufficientResolution : public Error {
public:
    using Error::Error;
};

// The scheme parameters make the stability interval empty (for example a
// diffusion parameter at or beyond the admissible boundary).
class DegenerateModel : public Error {
public:
    using Error::Error;
};

// The Godunov flux was requested for a local flux that is not monotone
// nondecreasing; only that case has the simple upwind closed form used here.
class UnsupportedFlux : public Error {
public:
    using Error::Error;
};

// A state entry became NaN or infinite during time marching.
class NonFiniteState : public Error {
public:
    using Error::Error;
};

// The numerical support reached the zone near a domain boundary where the
// zero-extension convolution no longer emulates the whole real line.
class SupportClipped : public Error {
public:
    using Error::Error;
};

// Two grids that must be an exact 2:1 refinement pair (same bounds, doubled
// cell count per axis) are not.
class GridMismatch : public Error {
public:
    using Error::Error;
};

// A file could not be opened, read, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

// An operation that needs a closed-form exact solution was called on a model
// that does not provide one.
class NoExactSolution : public Error {
public:
    using Error::Error;
};

// A runtime stability monitor failed; carries which monitor, at which step,
// and by how much.
class MonitorViolation : public Error {
public:
    MonitorViolation(const std::string& item, long step, double margin,
                     const std::string& detail)
        : Error("monitor '" + item + "' violated at step " +
                std::to_string(step) + " (margin " + std::to_string(margin) +
                "): " + detail),
          item_(item), step_(step), margin_(margin) {}

    const std::string& item() const { return item_; }
    long step() const { return step_; }
    double margin() const { return margin_; }

private:
    std::string item_;
    long step_;
    double margin_;
};

}  // namespace nlfv

#endif
