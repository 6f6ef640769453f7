#pragma once

#include <stdexcept>
#include <string>

namespace kreg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point or vector of the wrong dimension, or objects bound to different kernels.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A solver or factorization could not deliver a result within its tolerances.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace kreg
