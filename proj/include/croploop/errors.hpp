#pragma once

#include <stdexcept>
#include <string>

namespace croploop {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A region collapsed to zero area (after clamping or projection).
class DegenerateRegionError : public Error {
 public:
  using Error::Error;
};

// A local coordinate lies outside the innermost frame of a chain.
class FrameMismatchError : public Error {
 public:
  using Error::Error;
};

// No well-formed action expression could be extracted from policy text.
class ParseFailureError : public Error {
 public:
  using Error::Error;
};

// A remote endpoint could not be reached after the configured retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A manifest or dataset row failed schema validation.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& msg, long line = -1)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_ = -1;
};

// One or more referenced image paths do not resolve.
class MissingImageError : public Error {
 public:
  using Error::Error;
};

// Invalid pipeline or generator configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An index referenced a step of the wrong kind or out of range.
class IndexErrorEx : public Error {
 public:
  using Error::Error;
};

}  // namespace croploop
