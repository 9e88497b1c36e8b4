#pragma once

#include <stdexcept>
#include <string>

namespace scatnet {

/// Base class for all scatnet errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or size mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Blocks or pairs that do not form a valid partition of the index range.
class PartitionError : public Error {
 public:
  using Error::Error;
};

/// An operation that needs at least one element received none.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// Invalid scalar arguments (probabilities, counts, tolerances).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value encountered inside an iterative routine.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, long iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

/// File parsing or serialization failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scatnet
