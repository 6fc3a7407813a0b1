#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "illposed/gallery.hpp"
#include "illposed/linalg.hpp"
#include "illposed/projected_gradient.hpp"
#include "illposed/stabilizer.hpp"

namespace illposed {

/// F(u) = ||A(u) - f_delta|| + delta * phi(u). The residual is not squared.
double f_functional(const Operator& op, const GridFunction& f_delta, double delta,
                    const Stabilizer& stab, const GridFunction& u);

/// Minimizer of ||A u - f_delta||^2 + lambda * phi(u) for linear A.
///
/// Solved as the stacked least-squares problem [W^{1/2} A; sqrt(lambda) L] u = [W^{1/2} f; 0]
/// with a column-pivoted Householder QR; throws SingularSystem when that matrix is rank
/// deficient.
GridFunction tikhonov_point(const Operator& op, const Stabilizer& stab, const GridFunction& f_delta,
                            double lambda);

struct PathPoint {
  double lambda;
  GridFunction u;
  double residual;
  double phi;
};

std::vector<PathPoint> tikhonov_path(const Operator& op, const Stabilizer& stab,
                                     const GridFunction& f_delta,
                                     const std::vector<double>& lambdas);

/// `count` log-spaced values spanning [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct VariationalOptions {
  // Linear path search.
  std::size_t grid_points = 25;
  double lambda_min = 1e-12;
  double lambda_max = 1e12;
  double refine_tol = 1e-3;

  // Nonlinear projected-gradient search.
  std::size_t starts = 5;
  std::uint64_t seed = 0;
  /// Continuation stages reweighting the surrogate penalty by delta * ||A(u) - f_delta||.
  std::size_t reweight_stages = 8;
  ProjectedGradientOptions inner;
};

struct VariationalResult {
  GridFunction u_delta;
  /// A(u_delta).
  GridFunction forward;
  double F_value;
  double residual_noisy;
  std::optional<double> residual_exact;
  double phi_u;
  /// Tikhonov weight lambda of ||Au-f||^2 + lambda*phi that produced u_delta.
  double lambda_star;
  /// Smallest F value seen during the search.
  double m_hat;
};

/// Returns u_delta with F(u_delta) <= m_hat + delta.
///
/// Linear operators: F is minimized along the Tikhonov path, first on a log-spaced lambda
/// grid and then by golden-section refinement of the bracket around the best grid node.
/// Nonlinear operators: multi-start projected gradient on 1/2 ||A(u)-f||^2 + mu * phi(u),
/// starting from mu = delta and reweighting mu <- delta * ||A(u)-f||, which is the
/// stationarity condition of F itself; every stage is a candidate ranked by F.
VariationalResult minimize_variational(const Operator& op, const GridFunction& f_delta,
                                       double delta, const Stabilizer& stab,
                                       const VariationalOptions& opts = {});

/// Fills residual_exact from the exact data.
void attach_exact_data(VariationalResult& res, const GridFunction& f_exact);

struct VariationalCertificate {
  double c1;  // 1 + phi(y)
  double c;   // c1 + 1
  double tol;
  bool bound_18_ok;   // m_hat <= c1 * delta
  bool bound_19_ok;   // F(u_delta) <= c * delta
  bool bound_110_ok;  // phi(u_delta) <= c
  double slack_18;
  double slack_19;
  double slack_110;

  bool all_ok() const noexcept { return bound_18_ok && bound_19_ok && bound_110_ok; }
};

/// Checks the bounds implied by F(y) <= (1 + phi(y)) delta. Needs the true solution.
VariationalCertificate variational_certificate(const VariationalResult& res,
                                               const Stabilizer& stab,
                                               const std::optional<GridFunction>& y_true,
                                               double delta);

inline VariationalCertificate variational_certificate(const VariationalResult& res,
                                                      const ProblemInstance& problem,
                                                      const Stabilizer& stab, double delta) {
  return variational_certificate(res, stab, problem.y_true, delta);
}

/// Certificate thresholds from phi(y) alone.
VariationalCertificate variational_thresholds(double phi_y, double delta, double m_hat,
                                              double F_value, double phi_u);

/// Gradient of 1/2 ||A(u) - f||^2 in the grid inner product.
GridFunction residual_gradient(const Operator& op, const GridFunction& f, const GridFunction& u);

}  // namespace illposed
