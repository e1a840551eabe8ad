#pragma once

#include <stdexcept>
#include <string>

namespace shiftkl {

// Shape or argument mismatch supplied by the caller.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the range where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A documented precondition of a lemma-level formula does not hold.
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class FeasibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Divergence against a singular reference law.
class DivergenceUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class OracleScaleError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, long step = -1)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

}  // namespace shiftkl
