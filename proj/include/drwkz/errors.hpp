#pragma once

#include <stdexcept>
#include <string>

namespace drwkz {

/// Input lies outside the domain of an operation (non-unit inverse,
/// negative exponent on a non-invertible atom, unrepresentable factor...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Problem size exceeds a configured bound.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input (JSON files, expression strings, derivations).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A derivation step that is structurally malformed. Carries the index of
/// the offending step.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace drwkz
