#pragma once

#include <stdexcept>
#include <string>

namespace rlsw {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: wavelet family, window sizes, truncation fraction.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported input data (non-dyadic lengths, ragged CSV, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerically singular or otherwise unusable matrices.
class LinAlgError : public Error {
 public:
  using Error::Error;
};

/// Replicate or scale index outside the valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlsw
