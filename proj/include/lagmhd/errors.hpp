#pragma once

#include <stdexcept>
#include <string>

namespace lagmhd {

/// Bad parameters, malformed configuration, shape mismatches. CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical abort: vacuum collapse, non-solvable implicit system, NaN state.
/// CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t node, double time)
        : std::runtime_error(what), node_(node), time_(time) {}
    explicit NumericalError(const std::string& what)
        : std::runtime_error(what), node_(0), time_(0.0) {}

    std::size_t node() const { return node_; }
    double time() const { return time_; }

private:
    std::size_t node_;
    double time_;
};

/// Filesystem failures surfaced with the offending path. CLI exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lagmhd
