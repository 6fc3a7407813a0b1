#pragma once

#include <cmath>
#include <random>

#include "illposed/linalg.hpp"

namespace illposed::testing {

inline GridFunction random_function(const Grid& g, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::VectorXd v(g.size());
  for (auto& x : v) x = dist(rng);
  return GridFunction(g, std::move(v));
}

inline double random_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace illposed::testing
