#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace retract_iter {

/// Precondition or argument failure (dimension mismatch, bad parameter, ...).
struct InvalidInput : std::invalid_argument {
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Expression evaluation failed (division by zero, log of non-positive, ...).
/// `position` is the byte offset of the offending node in the source text.
struct EvalError : std::runtime_error {
  std::size_t position;
  EvalError(const std::string& what, std::size_t pos)
      : std::runtime_error(what), position(pos) {}
};

/// A mapping was applied to a point outside its domain. Callers are expected
/// to retract first; silent projection would hide nonself behavior.
struct DomainViolation : std::runtime_error {
  explicit DomainViolation(const std::string& what) : std::runtime_error(what) {}
};

/// An iteration produced a non-finite or otherwise unusable iterate.
struct NumericalBlowup : std::runtime_error {
  int iteration;
  NumericalBlowup(const std::string& what, int n)
      : std::runtime_error(what), iteration(n) {}
};

}  // namespace retract_iter
