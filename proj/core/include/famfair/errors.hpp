#pragma once

#include <stdexcept>
#include <string>

namespace famfair {

/// Input that violates a documented precondition or data-model invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance or allocation document.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A combinatorial search or table would exceed its configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ledger or protocol invariant failed at runtime (only raised when
/// verification is enabled).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace famfair
