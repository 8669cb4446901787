#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldq {

// Root of every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(Format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string Format(const std::string& what, std::size_t line,
                            std::size_t column) {
    if (line == 0) return what;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// A value violates a domain invariant (bad identifier text, literal in
// subject position, ...).
class InvalidValue : public Error {
 public:
  using Error::Error;
};

class SurjectivityError : public Error {
 public:
  using Error::Error;
};

class DuplicateMapping : public Error {
 public:
  using Error::Error;
};

class UnknownDocument : public Error {
 public:
  using Error::Error;
};

// Enumeration was requested from a web that cannot enumerate its documents.
class InfiniteWeb : public Error {
 public:
  using Error::Error;
};

// An unbounded traversal was requested over a web that may be infinite.
class BudgetRequired : public Error {
 public:
  using Error::Error;
};

class IllegalLiteralPosition : public Error {
 public:
  using Error::Error;
};

// An augmentation or task was requested whose preconditions do not hold.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

class UnsupportedCriterion : public Error {
 public:
  using Error::Error;
};

// The remote side of a web could not be reached or spoke garbage. Engines
// propagate this; it is never interpreted as a missing document.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A remote web answered differently for an identifier it answered before.
class StaticWebViolation : public TransportError {
 public:
  using TransportError::TransportError;
};

// The server could not bind its listening socket.
class BindError : public TransportError {
 public:
  using TransportError::TransportError;
};

class MalformedWord : public Error {
 public:
  MalformedWord(const std::string& expected, std::size_t position)
      : Error("malformed word at offset " + std::to_string(position) +
              ": expected " + expected),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace ldq
