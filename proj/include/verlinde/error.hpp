#pragma once

#include <stdexcept>
#include <string>

namespace verlinde {

/// Input that violates a documented precondition (bad file, unstable (g,n),
/// label out of range, ...).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A fusion datum failed one of its axioms. `axiom()` names it.
class InvariantViolation : public InvalidInput {
 public:
  InvariantViolation(std::string axiom, const std::string& what)
      : InvalidInput("invariant violation (" + axiom + "): " + what),
        axiom_(std::move(axiom)) {}

  const std::string& axiom() const noexcept { return axiom_; }

 private:
  std::string axiom_;
};

/// Requested operation falls outside the implemented product calculus.
class UnsupportedOperation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace verlinde
