#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace probwave {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (non-finite value, bad size, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A point was evaluated on the wrong side of the measurement point for the
/// requested branch, or a grid straddles the measurement point.
class RegionError : public Error {
 public:
  using Error::Error;
};

/// An integral that the caller asked for does not converge (e.g. R = 0).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations)
      : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

}  // namespace probwave
