// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarflow {

// Input failed structural validation (bad JSON, bad shapes, bad weights).
// CLI maps this family to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Operation invoked with arguments outside its contract.
class UsageError : public ValidationError {
 public:
  explicit UsageError(const std::string& what) : ValidationError(what) {}
};

// Matrix shapes incompatible with the requested operation.
class ShapeError : public ValidationError {
 public:
  explicit ShapeError(const std::string& what) : ValidationError(what) {}
};

// Result would exceed the configured element cap.
class CapacityError : public ValidationError {
 public:
  explicit CapacityError(const std::string& what) : ValidationError(what) {}
};

// Requested tensor order or label outside the implemented range.
class UnsupportedError : public ValidationError {
 public:
  explicit UnsupportedError(const std::string& what) : ValidationError(what) {}
};

// A caller-supplied numerical precondition does not hold.
class PreconditionError : public ValidationError {
 public:
  explicit PreconditionError(const std::string& what) : ValidationError(what) {}
};

// Iteration hit its budget before meeting the tolerance. Carries the last
// iterate so callers can inspect or restart. CLI maps this family to exit 2.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, double residual,
                   std::int64_t iterations,
                   std::vector<std::complex<double>> last_iterate = {})
      : std::runtime_error(what),
        last_estimate(last_estimate),
        residual(residual),
        iterations(iterations),
        last_iterate(std::move(last_iterate)) {}

  double last_estimate;
  double residual;
  std::int64_t iterations;
  std::vector<std::complex<double>> last_iterate;
};

// A fit was requested on a series with no resolvable signal. Carries the
// noise floor so callers can report how far the data sits below it.
class InsufficientSignalError : public std::runtime_error {
 public:
  InsufficientSignalError(const std::string& what, double noise_floor,
                          int admissible_points)
      : std::runtime_error(what),
        noise_floor(noise_floor),
        admissible_points(admissible_points) {}

  double noise_floor;
  int admissible_points;
};

}  // namespace haarflow
