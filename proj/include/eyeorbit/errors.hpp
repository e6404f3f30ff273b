#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eyeorbit {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector or matrix sizes.
class DimensionError : public Error {
public:
  using Error::Error;
};

// Geometry where a distance or its Jacobian is undefined (tip on the eye
// surface, non-unit direction, coincident points, ...).
class DegenerateGeometryError : public Error {
public:
  using Error::Error;
};

// A state or scene that violates a constraint before control starts.
class ConfigurationError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string& what, std::ptrdiff_t row)
      : Error(what), row_(row) {}

  // Index of the most violated constraint row, -1 if unknown.
  std::ptrdiff_t row() const noexcept { return row_; }

private:
  std::ptrdiff_t row_;
};

}  // namespace eyeorbit
