#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plhvcsp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : what + " (line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Raised when an enumeration would exceed a configured cardinality cap.
class SizeGuardError : public Error {
 public:
  SizeGuardError(const std::string& what, double cardinality, double cap)
      : Error(what + ": cardinality " + format(cardinality) + " exceeds cap " + format(cap)),
        cardinality_(cardinality),
        cap_(cap) {}

  double cardinality() const { return cardinality_; }
  double cap() const { return cap_; }

 private:
  static std::string format(double v) {
    if (v < 1e15) return std::to_string(static_cast<unsigned long long>(v));
    return std::to_string(v);
  }
  double cardinality_;
  double cap_;
};

class ExponentOverflow : public Error {
 public:
  using Error::Error;
};

class DomainNotClosed : public Error {
 public:
  using Error::Error;
};

class NoExtension : public Error {
 public:
  using Error::Error;
};

class OrderViolation : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

}  // namespace plhvcsp
