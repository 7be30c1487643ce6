#pragma once

#include <stdexcept>
#include <string>

namespace fcpd {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (ragged CSV rows, unparsable JSON, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input that violates a data contract (non-finite
// values, too few observations, shape mismatch).
class DataError : public Error {
 public:
  using Error::Error;
};

// Index or window arguments outside their admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value (alpha outside [0,1), bad bandwidth, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A quantity needed downstream is identically zero (no variation, zero
// break size), so the requested output does not exist.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcpd
