#pragma once

#include <stdexcept>
#include <string>

namespace sldg {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// Invalid curved geometry (self-intersecting upstream boundary, folded arc).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Two arcs coincide over a stretch; intersection points are not isolated.
class OverlapError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class OrientationError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class RemapConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A time step failed; carries the offending element.
class StepError : public Error {
 public:
  StepError(const std::string& what, int element)
      : Error("element " + std::to_string(element) + ": " + what), element_(element) {}
  int element() const noexcept { return element_; }

 private:
  int element_;
};

}  // namespace sldg
