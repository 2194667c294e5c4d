#pragma once

#include <stdexcept>
#include <string>

namespace lrt {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input: config values, malformed files, out-of-domain points, shape
// mismatches. CLI maps this to exit code 1.
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Iterative solver ran out of iterations or a residual diverged. CLI maps
// this to exit code 2.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Grid file on disk does not match the documented layout.
struct FormatError : ValidationError {
    explicit FormatError(const std::string& msg) : ValidationError(msg) {}
};

// A geodesic failed to reach the boundary within the arc-length cap.
struct TrappedRayError : Error {
    explicit TrappedRayError(const std::string& msg) : Error(msg) {}
};

}  // namespace lrt
