#pragma once

#include <stdexcept>
#include <string>

namespace dynlax {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedAlgebra : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

// q hit a pole of the r-matrix (alpha(q) ~ 0 for a root in the Levi span).
struct DomainViolation : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

// A simple-root coefficient is not positive, so the real log is unavailable.
struct ChartError : Error {
  using Error::Error;
};

// Non-positive diagonal handed to the torus logarithm.
struct BranchError : Error {
  using Error::Error;
};

struct BigCellError : Error {
  using Error::Error;
};

struct PatternError : Error {
  using Error::Error;
};

// Complex or colliding eigenvalues while following the Levi eigenbasis.
struct PathBreakdown : Error {
  using Error::Error;
};

struct AccuracyError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

}  // namespace dynlax
