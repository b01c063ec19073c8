#pragma once

#include <stdexcept>
#include <string>

namespace soscert {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};

// Vandermonde system for the requested nodes/basis is numerically singular.
struct NotUnisolvent : Error {
  using Error::Error;
};

// Sum of SOS block sizes does not match the node count.
struct WeightDegreeMismatch : Error {
  using Error::Error;
};

// Operation needs M(lambda) positive definite but lambda is outside the domain.
struct OutOfDomain : Error {
  using Error::Error;
};

// Linear algebra failure inside a solver iteration.
struct SolveError : Error {
  using Error::Error;
};

struct UnknownPreset : Error {
  using Error::Error;
};

// Finite-difference stencil would leave the domain even after shrinking.
struct InsufficientMargin : Error {
  using Error::Error;
};

}  // namespace soscert
