#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace toucan {

/// Invalid configuration (round count, profile widths, unsupported mode).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value outside the domain an operation accepts.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Two contenders presented the same identifier to arbitration.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Text input that failed to parse. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Scenario could not be executed (identifier collision on the bus, bad node reference).
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace toucan

namespace toucan {

/// No key record covers the requested identifier.
class MissingKey : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace toucan
