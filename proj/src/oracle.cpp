#include "illposed/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "illposed/error.hpp"

namespace illposed::oracle {

GridMinimum brute_force_minimize(const Objective& objective, const SearchBox& box) {
  const auto dim = static_cast<std::size_t>(box.lower.size());
  if (dim == 0 || dim > max_dimension)
    throw InvalidParameter("brute_force_minimize: dimension must be 1.." +
                           std::to_string(max_dimension));
  if (static_cast<std::size_t>(box.upper.size()) != dim)
    throw InvalidParameter("brute_force_minimize: lower/upper dimension mismatch");
  if (box.resolution < 3) throw InvalidParameter("brute_force_minimize: resolution must be >= 3");
  for (std::size_t k = 0; k < dim; ++k)
    if (!(box.lower[k] < box.upper[k]))
      throw InvalidParameter("brute_force_minimize: lower < upper required on every axis");
  if (std::pow(static_cast<double>(box.resolution), static_cast<double>(dim)) > max_grid_points)
    throw BudgetExceeded("brute_force_minimize: grid exceeds the 1e7 point budget");

  const auto r = box.resolution;
  const Eigen::VectorXd cell = (box.upper - box.lower) / static_cast<double>(r - 1);
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= r;

  Eigen::VectorXd x(dim);
  Eigen::VectorXd best_point = box.lower;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = dim; k-- > 0;) {
      const std::size_t idx = rem % r;
      rem /= r;
      // The last node is set to the upper bound exactly.
      x[k] = idx + 1 == r ? box.upper[k] : box.lower[k] + static_cast<double>(idx) * cell[k];
    }
    const double v = objective(x);
    if (v < best) {
      best = v;
      best_point = x;
    }
  }
  return GridMinimum{best_point, best, cell};
}

GridMinimum brute_force_refined(const Objective& objective, const SearchBox& box,
                                std::size_t rounds, std::size_t zoom_resolution) {
  GridMinimum result = brute_force_minimize(objective, box);
  SearchBox zoom = box;
  if (zoom_resolution != 0) zoom.resolution = zoom_resolution;
  for (std::size_t i = 0; i < rounds; ++i) {
    if (!std::isfinite(result.value)) break;
    zoom.lower = result.point - 2.0 * result.cell;
    zoom.upper = result.point + 2.0 * result.cell;
    GridMinimum next = brute_force_minimize(objective, zoom);
    if (next.value <= result.value) {
      result = next;
    } else {
      result.cell = next.cell;
    }
  }
  return result;
}

double refine_1d(const std::function<double(double)>& g, double lo, double hi, double tol) {
  if (!(lo < hi)) throw InvalidParameter("refine_1d: bracket must satisfy lo < hi");
  if (!(tol > 0.0)) throw InvalidParameter("refine_1d: tol must be positive");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  auto eval = [&](double x) {
    const double v = g(x);
    if (!std::isfinite(v))
      throw NumericalDomainError("refine_1d: objective is not finite at x = " + std::to_string(x),
                                 0);
    return v;
  };
  auto width_ok = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    const double scale = mid == 0.0 ? 1.0 : std::abs(mid);
    return (b - a) / scale <= tol;
  };

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = eval(c);
  double gd = eval(d);
  for (int iter = 0; iter < 400 && !width_ok(a, b); ++iter) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = eval(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = eval(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace illposed::oracle
