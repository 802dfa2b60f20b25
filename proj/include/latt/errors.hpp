#pragma once

#include <stdexcept>
#include <string>

namespace latt {

// Malformed input, violated precondition or mismatched operands.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration or search exceeded its node budget. Never a silent truncation.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed result failed its own postcondition re-check.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latt
