#pragma once

#include <stdexcept>
#include <string>

namespace commfact {

/// Shapes of the operands do not agree.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input violates a documented precondition (other than shape or trace).
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The matrix is not trace-zero, so it is not a commutator.
class TraceError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A spectral routine failed to converge or produced unusable output.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed matrix text.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace commfact
