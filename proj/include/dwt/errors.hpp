#ifndef DWT_ERRORS_HPP
#define DWT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dwt {

// Input data violates a structural precondition (bad potential, bad word,
// malformed schedule, ...).  Maps to CLI exit code 1.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine failed to meet its contract (non-convergence, lost
// bracket, divergent series, ...).  Maps to CLI exit code 2.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// File system / serialization failure.  Maps to CLI exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dwt

#endif
