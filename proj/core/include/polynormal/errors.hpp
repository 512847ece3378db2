#pragma once

#include <stdexcept>
#include <string>

namespace polynormal {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that cannot describe a valid polytope or query. The CLI maps the
/// whole family to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class Unbounded : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class Empty : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PointNotInterior : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotSimple : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotGeneric : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line)
      : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A query point sits within tolerance of a sheet of the bifurcation set.
class OnBifurcationSet : public Error {
 public:
  using Error::Error;
};

class FailedPerturbation : public Error {
 public:
  using Error::Error;
};

/// A mathematical invariant failed. Always a kernel bug or a tolerance
/// breakdown; the message names the invariant. CLI exit code 3.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class TooManyChambers : public Error {
 public:
  using Error::Error;
};

class NonTransversal : public Error {
 public:
  using Error::Error;
};

class Borderline : public Error {
 public:
  using Error::Error;
};

class RejectionLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace polynormal
