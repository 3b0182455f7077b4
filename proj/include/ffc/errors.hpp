#pragma once

#include <stdexcept>
#include <string>

namespace ffc {

/// Base class for every error raised by the library. The CLI maps any
/// `ffc::Error` escaping a subcommand to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class PathError : public Error {
 public:
  using Error::Error;
};

/// Bad magic, version or dtype code in a tensor file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Payload shorter or longer than the header declares.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or otherwise invalid tensor contents.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Extents that do not fit the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range scalar parameter (rho, ratios, counts).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed cost-model configuration; the message names the offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ffc
