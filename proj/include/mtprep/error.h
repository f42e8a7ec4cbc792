#pragma once

#include <stdexcept>
#include <string>

namespace mtprep {

// Base of every error thrown by the library. The CLI maps the three
// subclasses onto its exit codes (1 usage, 2 data, 3 IO).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: invalid UTF-8, bad alignment tokens, count mismatches.
class DataError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or arguments supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtprep
