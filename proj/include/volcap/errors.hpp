#pragma once

#include <stdexcept>
#include <string>

namespace volcap {

/// Base class for every error raised by the library. `module()` names the
/// component that raised it so batch front-ends can report provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Argument outside the admissible domain (t outside [0,1], a > b, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Incompatible matrix shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure, non-finite values, singular matrices.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A tolerance produced an inconsistent answer (e.g. odd rank of a skew matrix).
class ToleranceError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an input that violates its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace volcap
