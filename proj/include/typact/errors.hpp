#pragma once

#include <stdexcept>
#include <string>

namespace typact {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (group expressions, JSON payloads).
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  explicit ParseError(const std::string& what) : Error(what), position(0) {}
  std::size_t position;
};

// A documented operation precondition does not hold for the given input.
struct PreconditionError : Error {
  using Error::Error;
};

// The requested computation exceeds a configured budget.
struct BudgetError : Error {
  using Error::Error;
};

}  // namespace typact
