#pragma once

#include <stdexcept>
#include <string>

namespace covsdp {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument values (negative scale, probability outside (0,1), k > n, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Labels with an empty cluster or an index outside [0, r).
class InvalidLabels : public Error {
 public:
  using Error::Error;
};

// Shape mismatch between matrices or an unreachable target dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input data carries no usable signal (e.g. all covariates identical).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

// An eigensolver or other numerical kernel reported failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Exact enumeration requested above its supported size.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Closed-form quantity evaluated outside the regime where it is defined.
class OutOfRegime : public Error {
 public:
  using Error::Error;
};

// Every grid point of a tuning run failed.
class TuningError : public Error {
 public:
  using Error::Error;
};

// Malformed experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File contents that do not match the documented format.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, int line)
      : DataError(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Node index outside [0, n) in an input file.
class IndexError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace covsdp
