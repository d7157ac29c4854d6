#pragma once

#include <stdexcept>
#include <string>

namespace urysohn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke an operation's precondition.
struct PreconditionError : Error {
  using Error::Error;
};

// Table is not total where it has to be (distinct from an axiom violation).
struct StructuralError : Error {
  using Error::Error;
};

// A solver found no solution although one was expected.
struct InfeasibleError : Error {
  using Error::Error;
};

// The oracle refused a growth request; nothing was added.
struct GrowthError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t line = 0, std::size_t col = 0)
      : Error(line ? ("line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg) : msg),
        line(line),
        col(col) {}
  std::size_t line;
  std::size_t col;
};

}  // namespace urysohn
