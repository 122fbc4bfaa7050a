#pragma once

#include <stdexcept>
#include <string>

namespace kseries {

/// Base class for all recoverable kseries failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A polynomial or basis asks for a moment order the input does not provide.
struct InsufficientMoments : Error {
    using Error::Error;
};

/// The Hankel moment matrix is not positive definite: the reference is
/// numerically degenerate (e.g. variance too small) or the moments invalid.
struct MomentMatrixNotPD : Error {
    using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
struct QuadratureFailure : Error {
    using Error::Error;
};

struct DegreeMismatch : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonPositiveVariance : Error {
    using Error::Error;
};

/// The method-of-moments linear system is singular at this order.
struct SingularSystem : Error {
    using Error::Error;
};

struct EmptyData : Error {
    using Error::Error;
};

/// The clipped series carries less than half its mass; sampling refused.
struct DegenerateEstimate : Error {
    using Error::Error;
};

/// A non-finite intermediate value aborted a simulation replication.
struct NumericOverflow : Error {
    using Error::Error;
};

/// Loop-program parse failure, with 1-based source position.
struct SyntaxError : Error {
    int line = 0;
    int column = 0;
    SyntaxError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ")"),
          line(line_),
          column(col_) {}
};

struct UseBeforeAssign : SyntaxError {
    using SyntaxError::SyntaxError;
};

struct UnknownFunction : SyntaxError {
    using SyntaxError::SyntaxError;
};

struct NestedLoop : SyntaxError {
    using SyntaxError::SyntaxError;
};

}  // namespace kseries
