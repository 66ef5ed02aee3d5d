#pragma once

#include <stdexcept>
#include <string>

namespace qgibbs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad geometry, unknown model, overlapping regions, ...
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A dense operator would exceed the Hilbert-space dimension cap.
class DimensionCapExceeded : public Error {
 public:
  using Error::Error;
};

/// A hard numerical invariant failed (strong subadditivity, converse recovery
/// bound, channel commutation, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace qgibbs
