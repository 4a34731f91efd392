#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace urt {

/// Thrown by iterative solvers that hit their iteration budget.
/// Carries the last iterate so callers can diagnose or restart;
/// distinct from an "infeasible" verdict, which is a regular result.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual, int iterations,
                 Eigen::VectorXd last_iterate)
      : std::runtime_error(what),
        residual(residual),
        iterations(iterations),
        last_iterate(std::move(last_iterate)) {}

  double residual;
  int iterations;
  Eigen::VectorXd last_iterate;
};

/// Thrown when a generated scenario cannot be reduced to a valid
/// interference model (e.g. a vanishing useful-signal coefficient).
class DegenerateScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace urt
