#pragma once

#include <stdexcept>
#include <string>

namespace qring {

/// Argument outside the mathematical domain of a function (e.g. ln Γ(x) at x ≤ 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller violated an operation precondition (wrong special case, bad parameters).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The model is evaluated at a configuration where the quantity is undefined.
class SingularConfiguration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested parameter lies outside the range an operation supports reliably.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace qring
