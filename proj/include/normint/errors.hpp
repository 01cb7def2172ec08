#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace normint {

// Failure classes map one-to-one onto CLI exit codes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative or direct solve fails. Carries the best iterate
/// seen so far so callers can inspect or recover from it.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> best_iterate = {},
              double residual = 0.0, int iterations = 0)
      : std::runtime_error(what),
        best_iterate_(std::move(best_iterate)),
        residual_(residual),
        iterations_(iterations) {}

  const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> best_iterate_;
  double residual_;
  int iterations_;
};

}  // namespace normint
