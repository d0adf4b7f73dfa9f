#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tricache {

/// Malformed text input. `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Operation issued in the wrong lifecycle state (double exposure, get outside an epoch, ...).
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A request would exceed addressable memory or a format limit.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Socket-level failure (refused, reset, short read).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Peer sent or reported a malformed frame.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary file does not match the expected layout.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tricache
