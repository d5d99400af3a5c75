#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace isolight {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A region or kernel offset falls outside the raster it indexes.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A spectrum selection touches frequencies outside the passband.
class InvalidSelectionError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Inputs that cannot come from the assumed model, e.g. a complex
/// solution for a real-valued signal.
class InconsistentInputError : public Error {
 public:
  using Error::Error;
};

class NoSignalError : public Error {
 public:
  using Error::Error;
};

/// Raised when a system cannot be solved to working precision. Carries
/// the 2-norm condition estimate of the offending matrix.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class SingularError : public IllConditionedError {
 public:
  explicit SingularError(const std::string& what)
      : IllConditionedError(what, std::numeric_limits<double>::infinity()) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content; offset is the byte position where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace isolight
