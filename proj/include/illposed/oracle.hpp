#pragma once

#include <functional>

#include <Eigen/Core>

namespace illposed::oracle {

/// Axis-aligned box sampled with `resolution` points per axis (endpoints included).
struct SearchBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::size_t resolution = 3;
};

inline constexpr std::size_t max_dimension = 3;
inline constexpr double max_grid_points = 1e7;

struct GridMinimum {
  Eigen::VectorXd point;
  double value;
  /// Grid spacing per axis of the box the minimum was taken on.
  Eigen::VectorXd cell;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Exhaustive evaluation on the tensor grid; ties resolve to the first point in
/// lexicographic order (axis 0 slowest). Objectives may return +inf to exclude points.
GridMinimum brute_force_minimize(const Objective& objective, const SearchBox& box);

/// Repeated brute-force search, each round on a box of +-2 cells around the previous best.
/// Rounds after the first use `zoom_resolution` points per axis (0 keeps box.resolution).
GridMinimum brute_force_refined(const Objective& objective, const SearchBox& box,
                                std::size_t rounds, std::size_t zoom_resolution = 0);

/// Golden-section search for a minimizer of a unimodal g on [lo, hi], stopping once
/// (hi - lo) / |midpoint| <= tol (absolute width when the midpoint is 0).
double refine_1d(const std::function<double(double)>& g, double lo, double hi, double tol);

}  // namespace illposed::oracle
