#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cubound {

/// Invalid (m, d, g, T, ...) parameters or out-of-range counter indices.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A (v, c) event outside the precondition of the state-update maps.
class InvalidEventError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Power iteration ran out of iterations.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual, std::uint64_t iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::uint64_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::uint64_t iterations_;
};

/// The brute-force oracle refused an instance above its enumeration guard.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant (e.g. a kernel target outside the state space).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cubound
