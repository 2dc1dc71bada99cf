#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netmon {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown identifiers, bad dimensions, parse failures.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration guard was exceeded.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, double count)
      : Error(what), count_(count) {}
  double count() const { return count_; }

 private:
  double count_;
};

/// A numerical solver gave up (iteration cap, numerical breakdown).
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::size_t iterations)
      : Error(what), iterations_(iterations) {}
  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

/// Internal consistency check failed. Indicates a bug or broken numerics.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace netmon
