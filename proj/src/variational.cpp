#include "illposed/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>

#include "illposed/oracle.hpp"

namespace illposed {

namespace {

void require_delta(double delta, const char* where) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidParameter(std::string(where) + ": delta must be positive and finite");
}

struct Candidate {
  GridFunction u;
  GridFunction forward;
  double F;
  double residual;
  double phi;
  double lambda;
};

Candidate evaluate(const Operator& op, const GridFunction& f_delta, double delta,
                   const Stabilizer& stab, GridFunction u, double lambda) {
  GridFunction forward = op.apply(u);
  const double residual = l2_norm(forward - f_delta);
  const double phi = stab.value(u);
  return Candidate{std::move(u), std::move(forward), residual + delta * phi, residual, phi, lambda};
}

// Strictly better by value; equal values prefer the smaller lambda.
bool better(const Candidate& a, const Candidate& b) {
  return a.F < b.F || (a.F == b.F && a.lambda < b.lambda);
}

VariationalResult to_result(Candidate best, double m_hat) {
  return VariationalResult{std::move(best.u), std::move(best.forward), best.F, best.residual,
                           std::nullopt,       best.phi,               best.lambda, m_hat};
}

VariationalResult minimize_linear(const Operator& op, const GridFunction& f_delta, double delta,
                                  const Stabilizer& stab, const VariationalOptions& opts) {
  if (opts.grid_points < 3) throw InvalidParameter("minimize_variational: need >= 3 grid points");
  const std::vector<double> lambdas = log_grid(opts.lambda_min, opts.lambda_max, opts.grid_points);

  std::vector<Candidate> grid;
  grid.reserve(lambdas.size());
  for (double lambda : lambdas)
    grid.push_back(evaluate(op, f_delta, delta, stab, tikhonov_point(op, stab, f_delta, lambda),
                            lambda));

  std::size_t k = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i].F < grid[k].F) k = i;

  Candidate best = grid[k];
  const double lo = lambdas[k == 0 ? 0 : k - 1];
  const double hi = lambdas[std::min(k + 1, lambdas.size() - 1)];

  auto g = [&](double lambda) {
    Candidate c = evaluate(op, f_delta, delta, stab, tikhonov_point(op, stab, f_delta, lambda),
                           lambda);
    const double F = c.F;
    if (better(c, best)) best = std::move(c);
    return F;
  };
  const double refined = oracle::refine_1d(g, lo, hi, opts.refine_tol);
  g(refined);

  const double m_hat = best.F;
  return to_result(std::move(best), m_hat);
}

VariationalResult minimize_nonlinear(const Operator& op, const GridFunction& f_delta,
                                     double delta, const Stabilizer& stab,
                                     const VariationalOptions& opts) {
  if (opts.starts == 0) throw InvalidParameter("minimize_variational: need at least one start");
  const Grid& grid = op.grid();
  const CounterRng rng(opts.seed);

  Projection project = [&op](const GridFunction& u) {
    return op.positive_domain() ? clamp_nonnegative(u) : u;
  };

  std::optional<Candidate> best;
  bool any_converged = false;
  for (std::size_t s = 0; s < opts.starts; ++s) {
    Eigen::VectorXd v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = 0.5 + rng.uniform(s * grid.size() + i);
    GridFunction u(grid, std::move(v));

    double mu = delta;
    for (std::size_t stage = 0; stage <= opts.reweight_stages; ++stage) {
      SmoothObjective surrogate{
          [&](const GridFunction& x) {
            const double r = l2_norm(op.apply(x) - f_delta);
            return 0.5 * r * r + mu * stab.value(x);
          },
          [&](const GridFunction& x) {
            return residual_gradient(op, f_delta, x) + mu * stab.gradient(x);
          }};
      ProjectedGradientResult run = projected_gradient(surrogate, project, u, opts.inner);
      any_converged = any_converged || run.converged;
      u = run.u;

      Candidate c = evaluate(op, f_delta, delta, stab, u, 2.0 * mu);
      const double next_mu = delta * c.residual;
      if (!best || c.F < best->F) best = std::move(c);
      if (!(next_mu > 0.0)) break;
      mu = next_mu;
    }
  }
  if (!any_converged)
    throw SolverFailure("minimize_variational: projected gradient did not converge within " +
                            std::to_string(opts.inner.max_iter) + " iterations",
                        best->u, best->F);
  const double m_hat = best->F;
  return to_result(std::move(*best), m_hat);
}

}  // namespace

double f_functional(const Operator& op, const GridFunction& f_delta, double delta,
                    const Stabilizer& stab, const GridFunction& u) {
  require_delta(delta, "f_functional");
  return l2_norm(op.apply(u) - f_delta) + delta * stab.value(u);
}

GridFunction tikhonov_point(const Operator& op, const Stabilizer& stab, const GridFunction& f_delta,
                            double lambda) {
  if (!op.is_linear()) throw ContractViolation("tikhonov_point: operator must be linear");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InvalidParameter("tikhonov_point: lambda must be finite and nonnegative");
  if (!(f_delta.grid() == op.grid()))
    throw ContractViolation("tikhonov_point: data is not on the operator's grid");

  const Grid& grid = op.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Eigen::VectorXd sw = grid.quadrature_weights().cwiseSqrt();

  const Eigen::Index extra = lambda > 0.0 ? 2 * n - 1 : 0;
  Eigen::MatrixXd system(n + extra, n);
  system.topRows(n) = sw.asDiagonal() * op.matrix();
  if (lambda > 0.0) system.bottomRows(extra) = std::sqrt(lambda) * stab.stacked_matrix(grid);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + extra);
  rhs.head(n) = sw.cwiseProduct(f_delta.values());

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system);
  if (qr.rank() < n)
    throw SingularSystem("tikhonov_point: regularized system is singular at lambda = " +
                             format_double(lambda),
                         lambda);
  return GridFunction(grid, qr.solve(rhs));
}

std::vector<PathPoint> tikhonov_path(const Operator& op, const Stabilizer& stab,
                                     const GridFunction& f_delta,
                                     const std::vector<double>& lambdas) {
  std::vector<PathPoint> path;
  path.reserve(lambdas.size());
  for (double lambda : lambdas) {
    GridFunction u = tikhonov_point(op, stab, f_delta, lambda);
    const double residual = l2_norm(op.apply(u) - f_delta);
    const double phi = stab.value(u);
    path.push_back(PathPoint{lambda, std::move(u), residual, phi});
  }
  return path;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw InvalidParameter("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

VariationalResult minimize_variational(const Operator& op, const GridFunction& f_delta,
                                       double delta, const Stabilizer& stab,
                                       const VariationalOptions& opts) {
  require_delta(delta, "minimize_variational");
  if (!(f_delta.grid() == op.grid()))
    throw ContractViolation("minimize_variational: data is not on the operator's grid");
  return op.is_linear() ? minimize_linear(op, f_delta, delta, stab, opts)
                        : minimize_nonlinear(op, f_delta, delta, stab, opts);
}

void attach_exact_data(VariationalResult& res, const GridFunction& f_exact) {
  res.residual_exact = l2_norm(res.forward - f_exact);
}

VariationalCertificate variational_thresholds(double phi_y, double delta, double m_hat,
                                              double F_value, double phi_u) {
  VariationalCertificate cert{};
  cert.c1 = 1.0 + phi_y;
  cert.c = cert.c1 + 1.0;
  cert.tol = 1e-9 * std::max(1.0, cert.c * delta);
  cert.slack_18 = cert.c1 * delta + cert.tol - m_hat;
  cert.slack_19 = cert.c * delta + cert.tol - F_value;
  cert.slack_110 = cert.c + cert.tol - phi_u;
  cert.bound_18_ok = cert.slack_18 >= 0.0;
  cert.bound_19_ok = cert.slack_19 >= 0.0;
  cert.bound_110_ok = cert.slack_110 >= 0.0;
  return cert;
}

VariationalCertificate variational_certificate(const VariationalResult& res,
                                               const Stabilizer& stab,
                                               const std::optional<GridFunction>& y_true,
                                               double delta) {
  if (!y_true)
    throw CertificateUnavailable("variational_certificate: the true solution is required");
  require_delta(delta, "variational_certificate");
  return variational_thresholds(stab.value(*y_true), delta, res.m_hat, res.F_value, res.phi_u);
}

GridFunction residual_gradient(const Operator& op, const GridFunction& f, const GridFunction& u) {
  return op.jacobian_adjoint_apply(u, op.apply(u) - f);
}

}  // namespace illposed
