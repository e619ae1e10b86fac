#pragma once

#include <stdexcept>
#include <string>

namespace loopalg {

/// Bad parameters or a request outside a precondition. Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation detected a broken invariant (d^2 != 0, an ill-defined
/// induced differential, a truncated range, an oracle mismatch).
/// Maps to CLI exit code 1.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

class RangeIncomplete : public InvariantViolation {
 public:
  explicit RangeIncomplete(const std::string& what)
      : InvariantViolation("range-incomplete: " + what) {}
};

}  // namespace loopalg
