#pragma once

#include <stdexcept>
#include <string>

namespace iwalog {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands that cannot be combined: prime mismatch, shape mismatch, malformed index sets.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Division by an element that is zero at its working precision.
class ZeroDivideError : public Error {
 public:
  explicit ZeroDivideError(int precision)
      : Error("zero-divide at precision " + std::to_string(precision)), precision_(precision) {}
  int precision() const { return precision_; }

 private:
  int precision_;
};

/// Input data rejected by a validator (non-unit determinant, wrong dimension, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Requested operation exists mathematically but is not provided (e.g. descending embeddings).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Polynomial product would exceed the hard size limit with no degree caps set.
class CapOverflowError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity contradicts a structural identity that must hold.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// Bad configuration file or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace iwalog
