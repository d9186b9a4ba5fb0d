#pragma once
#include <stdexcept>
#include <string>

namespace nlos {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scene/experiment configuration is malformed or inconsistent.
struct ConfigError : Error {
  using Error::Error;
};

/// A sampled path time falls outside the configured histogram window
/// (raised only in fail-on-late mode).
struct CoverageError : Error {
  using Error::Error;
};

/// Spectrum truncation left no usable frequencies (carrier unresolvable
/// at the given bin width).
struct BandEmptyError : Error {
  using Error::Error;
};

/// Array shapes of two operands do not line up.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A propagation kernel was evaluated across a (near-)zero distance.
struct SingularityError : Error {
  using Error::Error;
};

/// An operation received geometrically degenerate input.
struct DegenerateError : Error {
  using Error::Error;
};

/// Aperture extraction selected no points.
struct EmptyApertureError : Error {
  using Error::Error;
};

/// Reading or writing an on-disk artifact failed.
struct IoError : Error {
  using Error::Error;
};

}  // namespace nlos
