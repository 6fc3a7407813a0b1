#pragma once

#include <cstddef>
#include <functional>

#include "illposed/linalg.hpp"

namespace illposed {

/// Raised when an iterative solver exhausts its budget; carries the best point seen.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, GridFunction best, double best_value)
      : Error(what), best_(std::move(best)), best_value_(best_value) {}
  const GridFunction& best() const noexcept { return best_; }
  double best_value() const noexcept { return best_value_; }

 private:
  GridFunction best_;
  double best_value_;
};

struct SmoothObjective {
  std::function<double(const GridFunction&)> value;
  /// Gradient in the grid inner product.
  std::function<GridFunction(const GridFunction&)> gradient;
};

using Projection = std::function<GridFunction(const GridFunction&)>;

struct ProjectedGradientOptions {
  std::size_t max_iter = 4000;
  /// Stop when the objective decrease in one step is below ftol * max(1, |value|).
  double ftol = 1e-13;
  /// Stop when the step length is below xtol * max(1, ||u||).
  double xtol = 1e-12;
  double initial_step = 1.0;
};

struct ProjectedGradientResult {
  GridFunction u;
  double value;
  std::size_t iterations;
  bool converged;
};

/// Projected gradient descent with Armijo backtracking along the projection arc.
///
/// The iteration is monotone, so the returned iterate is the best one visited.
ProjectedGradientResult projected_gradient(const SmoothObjective& objective,
                                           const Projection& project, GridFunction start,
                                           const ProjectedGradientOptions& opts);

/// Projection onto the nonnegative cone.
GridFunction clamp_nonnegative(const GridFunction& u);

}  // namespace illposed
