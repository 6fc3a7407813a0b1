#pragma once

#include <string>
#include <vector>

#include "illposed/linalg.hpp"

namespace illposed {

struct ProblemParams {
  /// Kernel width of fredholm-gauss.
  double sigma = 0.1;
};

/// A test equation A(y) = f with known solution.
struct ProblemInstance {
  std::string name;
  Grid grid;
  Operator op;
  GridFunction y_true;
  GridFunction f_exact;
  std::string notes;
};

/// Names accepted by build_problem.
const std::vector<std::string>& problem_names();

/// Builds one of: diag-unbounded, volterra-int, fredholm-gauss, autoconv, identity.
///
/// identity is a well-posed baseline. All problems live on [0, 1]; diag-unbounded accepts
/// n >= 3 so it can be used at oracle scale, the rest need n >= 4.
ProblemInstance build_problem(const std::string& name, std::size_t n,
                              const ProblemParams& params = {});

struct ConditionReport {
  double sigma_max;
  double sigma_min;
  double ratio;
  bool ill_posed;  // ratio > 1e3
};

/// Extreme singular values of a linear operator in the grid inner product.
ConditionReport condition_report(const ProblemInstance& p);

}  // namespace illposed
