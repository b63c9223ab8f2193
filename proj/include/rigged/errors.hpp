#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rigged {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A seminorm or certificate level outside the triplet's ladder.
struct RangeError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

// Operation needs state the object does not carry (missing dual, non-strict basis).
struct StateError : Error {
  using Error::Error;
};

struct InjectivityError : Error {
  using Error::Error;
};

struct ContinuityError : Error {
  using Error::Error;
};

// Grid too narrow for the requested Hermite functions.
struct SupportError : Error {
  SupportError(const std::string& what, std::size_t index)
      : Error(what), offending_index(index) {}
  std::size_t offending_index;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
              ": " + message),
        line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

} // namespace rigged
