#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace enriched {

// Ordered key/value pairs naming the objects that witness a failed check.
using Witness = std::vector<std::pair<std::string, std::string>>;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message, Witness witness = {})
      : std::runtime_error(message), witness_(std::move(witness)) {}

  const Witness& witness() const { return witness_; }

 private:
  Witness witness_;
};

// Malformed input, unknown names, mismatched domains, exceeded guards.
class InputError : public Error {
 public:
  using Error::Error;
};

class DomainMismatch : public InputError {
 public:
  using InputError::InputError;
};

class GuardExceeded : public InputError {
 public:
  using InputError::InputError;
};

// A declared operation is not an operation of the data set.
class InvalidIncarnation : public Error {
 public:
  using Error::Error;
};

// A hypothesis of an operator construction does not hold (equivariance,
// invariance, bijectivity, extension conditions).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

// A check that a proven statement guarantees has failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace enriched
