#pragma once

#include <stdexcept>
#include <string>

namespace lwf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Distribution or configuration parameter out of range.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Data without spread (all values equal, zero variance).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Unusable input data (too short, non-finite).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Likelihood optimisation did not produce a usable fit.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Index or interval outside the valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content; the message names the offending row.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace lwf
