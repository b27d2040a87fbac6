#pragma once

#include <stdexcept>
#include <string>

namespace h2net {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user-supplied data: schema, dimensions, normalization, disconnected
// graph, out-of-range parameters.  CLI exit code 3.
struct InvalidInput : Error {
    using Error::Error;
};

// Numerical failures: singular pivots, lost convergence, a solver that
// cannot certify its own result.  CLI exit code 4.
struct NumericalError : Error {
    using Error::Error;
};

struct SingularMatrix : NumericalError {
    using NumericalError::NumericalError;
};

// Sylvester/Lyapunov operator is singular (A and -A^T share an eigenvalue).
struct SingularOperator : NumericalError {
    using NumericalError::NumericalError;
};

struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct ExpmOverflow : NumericalError {
    using NumericalError::NumericalError;
};

// A synthesis or certification step could not establish stability
// (InitFailure, NotStabilizing, NotSynchronizing, Unstable, Diverged).
struct SolverFailure : NumericalError {
    using NumericalError::NumericalError;
};

// Filesystem problems.  CLI exit code 5.
struct IoError : Error {
    using Error::Error;
};

} // namespace h2net
