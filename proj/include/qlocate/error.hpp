#pragma once

#include <stdexcept>
#include <string>

namespace qlocate {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched input (wrong bitstring length, bad characters).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A size limit was exceeded (qubit caps, enumeration caps).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A problem cannot be encoded with the requested encoder.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The objective produced a non-finite value during optimization.
class OptimizationError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or malformed CSV.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qlocate
