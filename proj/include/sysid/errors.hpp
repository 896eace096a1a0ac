#pragma once

#include <stdexcept>
#include <string>

namespace sysid {

// Base for every error raised by the library. The CLI maps these to exit
// code 2, except ParseError which is an input problem (exit code 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// rho(A) > 1 + tol_spec
class ExplosiveSystemError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

// Parameter outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A1 - A2 is not of the form H*G, so the per-step Gaussian factorization of
// the trajectory likelihood does not apply.
class KlInapplicableError : public Error {
 public:
  using Error::Error;
};

class RegressionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace sysid
