#pragma once

#include <stdexcept>
#include <string>

namespace mvqn {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text (dataset rows, model documents that are not valid JSON).
struct ParseError : Error {
    using Error::Error;
};

/// Structural mismatches: arity, order, out-of-range sector indices, empty datasets.
struct ShapeError : Error {
    using Error::Error;
};

/// Model files with an unknown or unsupported schema.
struct SchemaError : Error {
    using Error::Error;
};

/// Numerically degenerate arguments (zero vectors where a direction is required).
struct DegenerateError : Error {
    using Error::Error;
};

} // namespace mvqn
