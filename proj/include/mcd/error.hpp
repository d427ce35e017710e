#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input, unresolved references, violated preconditions.
struct ValidationError : Error {
    using Error::Error;
};

// An iterative method did not converge; `trace` holds the per-iteration log.
struct ConvergenceError : Error {
    std::vector<std::string> trace;
    ConvergenceError(const std::string& what, std::vector<std::string> t = {})
        : Error(what), trace(std::move(t)) {}
};

// Two independent computations of the same quantity disagree.
struct ConsistencyError : Error {
    using Error::Error;
};

}  // namespace mcd
