#pragma once

#include <stdexcept>
#include <string>

namespace trajthermo {

/// Broad failure class, used by the CLI to pick an exit status.
enum class ErrorCategory {
  kValidation,  // bad input: caller can fix it
  kNumerical,   // the computation itself failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Precondition violated: dimension mismatch, malformed input.
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what)
      : Error(ErrorCategory::kValidation, what) {}
};

/// Parameter outside its mathematical domain (beta <= 0, zero weight, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCategory::kValidation, what) {}
};

/// Operation not available for the given model (e.g. leapfrog on a
/// non-separable Hamiltonian).
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorCategory::kValidation, what) {}
};

/// Enumeration would exceed the configured path capacity.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what)
      : Error(ErrorCategory::kValidation, what) {}
};

/// A constraint cannot be met by any admissible multiplier.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ErrorCategory::kValidation, what) {}
};

/// Closed form is singular at the requested argument.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what)
      : Error(ErrorCategory::kNumerical, what) {}
};

/// Non-finite intermediate values.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCategory::kNumerical, what) {}
};

}  // namespace trajthermo
