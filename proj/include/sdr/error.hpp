#pragma once

#include <stdexcept>
#include <string>

namespace sdr {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Incompatible shapes (row-count mismatch, basis-dimension mismatch, ...).
struct DimensionError : Error {
    using Error::Error;
};

/// Invalid argument value (sparsity out of range, slice count too large, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// Rejected input data (non-finite entries, too few observations).
struct DataError : Error {
    using Error::Error;
};

/// Numerical failure (annihilated iterate, singular denominator, failed factorization).
struct NumericalError : Error {
    using Error::Error;
};

/// CSV parse failure; carries the 1-based line (and column when known).
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line, std::size_t column = 0)
        : Error(msg), line(line), column(column) {}
    std::size_t line;
    std::size_t column;
};

}  // namespace sdr
