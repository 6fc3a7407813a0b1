#include "illposed/projected_gradient.hpp"

#include <algorithm>
#include <cmath>

namespace illposed {

GridFunction clamp_nonnegative(const GridFunction& u) {
  return GridFunction(u.grid(), u.values().cwiseMax(0.0));
}

ProjectedGradientResult projected_gradient(const SmoothObjective& objective,
                                           const Projection& project, GridFunction start,
                                           const ProjectedGradientOptions& opts) {
  constexpr double armijo = 1e-4;
  constexpr double min_step = 1e-30;

  GridFunction u = project(start);
  double value = objective.value(u);
  double step = opts.initial_step;

  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    const GridFunction grad = objective.gradient(u);

    bool accepted = false;
    GridFunction candidate = u;
    double cand_value = value;
    while (step >= min_step) {
      candidate = project(u - step * grad);
      cand_value = objective.value(candidate);
      const GridFunction move = candidate - u;
      const double move_sq = inner(move, move);
      if (std::isfinite(cand_value) && cand_value <= value - armijo * move_sq / step) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return {u, value, iter, true};

    const double decrease = value - cand_value;
    const double move_norm = l2_norm(candidate - u);
    const double u_norm = l2_norm(u);
    u = std::move(candidate);
    value = cand_value;
    if (decrease <= opts.ftol * std::max(1.0, std::abs(value)) ||
        move_norm <= opts.xtol * std::max(1.0, u_norm))
      return {u, value, iter + 1, true};
    step *= 2.0;
  }
  return {u, value, opts.max_iter, false};
}

}  // namespace illposed
