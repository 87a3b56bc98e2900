#pragma once

#include <stdexcept>
#include <string>

namespace copolymer {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A requested horizon exceeds a precomputed table or a documented size limit.
class HorizonError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A checked invariant or acceptance gate did not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace copolymer
