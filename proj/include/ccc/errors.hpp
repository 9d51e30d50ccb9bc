#pragma once

#include <stdexcept>
#include <string>

namespace ccc {

/// Malformed input: bad dimensions, out-of-range indices, unparseable text.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand shapes do not fit the operation.
class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

/// Text formats (circuits, unitaries, gadget files) that fail to parse.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

/// The request is well formed but exceeds a configured desk-scale cap
/// (dense qubit count, gadget width, word length). Callers refuse rather
/// than truncate.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical object asked for does not exist for this input
/// (e.g. normalized action of a singular map).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ccc
