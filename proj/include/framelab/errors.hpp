#pragma once

#include <stdexcept>
#include <string>

namespace framelab {

/// Dimension/shape disagreement between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (e.g. exponent < 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A frame family violating its structural invariants (zero member, empty family).
class InvalidFamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inversion requested for a map that fails the conditioning gate.
class SingularOperatorError : public std::runtime_error {
 public:
  SingularOperatorError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}

  double condition() const { return condition_; }

 private:
  double condition_;
};

/// A documented precondition of an operation does not hold for the inputs.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structured input file could not be parsed against the expected schema.
class FileFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace framelab
