#pragma once

#include <stdexcept>
#include <string>

namespace stiefel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the arguments do not agree, or a rank exceeds a dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, asymmetric matrices and similar bad inputs.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A manifold constraint (unit norm, orthonormality) does not hold.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message names the line (and cell when known).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace stiefel
