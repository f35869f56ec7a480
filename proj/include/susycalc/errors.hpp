#pragma once

#include <stdexcept>
#include <string>

namespace susy {

/// Base class for all recoverable library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operands live in algebras with different generator counts, or a
/// dimension is out of the supported range.
struct DimensionError : Error {
    using Error::Error;
};

/// An argument has the wrong Z_2 grading (odd where even is required, etc).
struct ParityError : Error {
    using Error::Error;
};

/// An argument is outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

/// Metric not positive definite, degenerate frame, and similar.
struct GeometryError : Error {
    using Error::Error;
};

/// Non-finite values encountered during numerical evaluation.
struct NumericError : Error {
    using Error::Error;
};

/// Invalid run configuration (unknown manifold, bad parameters, bad flags).
struct ConfigError : Error {
    using Error::Error;
};

/// A located zero of a section fails the nondegeneracy requirement.
struct DegenerateZeroError : Error {
    using Error::Error;
};

/// Malformed or invalid input file.
struct LoadError : Error {
    using Error::Error;
};

/// Violated internal invariant; indicates a bug, not bad input.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace susy
