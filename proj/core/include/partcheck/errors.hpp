#pragma once

#include <stdexcept>
#include <string>

namespace partcheck {

// Bad argument to a library operation (wrong dimension, empty input, ...).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A fit could not be produced from the data, e.g. a threshold interval
// without samples. Carries the offending interval when known.
class IdentificationError : public std::runtime_error {
public:
  explicit IdentificationError(const std::string& what, int interval_index = -1,
                               double lo = 0.0, double hi = 0.0)
      : std::runtime_error(what), interval_index(interval_index), lo(lo), hi(hi) {}

  int interval_index;
  double lo;
  double hi;
};

// Device wiring violates an assembly constraint.
class AssemblyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Formula text could not be parsed; position is a 0-based byte offset.
class SyntaxError : public std::runtime_error {
public:
  SyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}

  std::size_t position;
};

// Project configuration is malformed or internally inconsistent.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// CSV input is malformed; line is 1-based.
class CsvError : public std::runtime_error {
public:
  CsvError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}

  std::size_t line;
};

}  // namespace partcheck
