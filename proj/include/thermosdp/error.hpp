#pragma once

#include <stdexcept>
#include <string>

namespace thermosdp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation (bad dimension, T <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (e.g. qubit count) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during a computation.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, long iteration = -1);
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

/// An operation needs a Pauli-sum encoding that the input does not carry.
class RepresentationError : public Error {
 public:
  using Error::Error;
};

/// Problem-file ingestion failure; `field` names the offending JSON path.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Writes a warning line to the diagnostic stream.
void log_warning(const std::string& message);

}  // namespace thermosdp
