#pragma once

#include <stdexcept>
#include <string>

namespace conical {

/// Violated precondition or type invariant (bad grid sizes, positive
/// curvature entries, malformed files, ...).  The CLI maps this to exit 2.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iteration or extrapolation failed to reach its target (Newton ran out
/// of steps, a limit sequence does not settle).  CLI exit 3.
class NonConvergenceError : public std::runtime_error {
public:
    explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace conical
