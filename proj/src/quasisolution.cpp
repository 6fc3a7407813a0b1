#include "illposed/quasisolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "illposed/variational.hpp"

namespace illposed {

namespace {

QuasiResult make_result(const Operator& op, const GridFunction& f_delta, const Compactum& k,
                        GridFunction u, std::optional<double> lambda, double boundary_tol) {
  GridFunction forward = op.apply(u);
  const double residual = l2_norm(forward - f_delta);
  const double phi = k.stabilizer().value(u);
  const bool boundary = std::abs(phi - k.rho()) <= boundary_tol * k.rho();
  return QuasiResult{std::move(u), std::move(forward), residual, std::nullopt,
                     phi,          residual,           boundary, lambda};
}

QuasiResult minimize_linear(const Operator& op, const GridFunction& f_delta, const Compactum& k,
                            const QuasiOptions& opts) {
  const Stabilizer& stab = k.stabilizer();
  const double rho = k.rho();

  try {
    GridFunction u0 = tikhonov_point(op, stab, f_delta, 0.0);
    if (k.contains(u0)) return make_result(op, f_delta, k, std::move(u0), 0.0, opts.boundary_tol);
  } catch (const SingularSystem&) {
    // Numerically rank-deficient A: the least-squares point is unbounded, hence outside K.
  }

  auto phi_at = [&](double lambda, GridFunction* out = nullptr) {
    GridFunction u = tikhonov_point(op, stab, f_delta, lambda);
    const double phi = stab.value(u);
    if (out) *out = std::move(u);
    return phi;
  };

  // lo: infeasible side (phi > rho), hi: feasible side (phi <= rho).
  double lo = opts.lambda_lo;
  double hi = opts.lambda_hi;
  for (int i = 0; i < 64 && phi_at(lo) <= rho; ++i) {
    lo *= 1e-2;
    if (lo < 1e-300) throw BracketFailure("minimize_on_compactum: no infeasible lambda found", lo, hi);
  }
  GridFunction u_hi(op.grid());
  double phi_hi = phi_at(hi, &u_hi);
  for (int i = 0; i < 64 && phi_hi > rho; ++i) {
    hi *= 1e2;
    if (hi > 1e300) throw BracketFailure("minimize_on_compactum: no feasible lambda found", lo, hi);
    phi_hi = phi_at(hi, &u_hi);
  }
  if (phi_hi > rho) throw BracketFailure("minimize_on_compactum: bracket expansion failed", lo, hi);

  for (std::size_t iter = 0; iter < opts.max_bisection; ++iter) {
    if (rho - phi_hi <= opts.boundary_tol * rho) break;
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    GridFunction u_mid(op.grid());
    const double phi_mid = phi_at(mid, &u_mid);
    if (phi_mid > rho) {
      lo = mid;
    } else {
      hi = mid;
      phi_hi = phi_mid;
      u_hi = std::move(u_mid);
    }
  }
  if (rho - phi_hi > opts.boundary_tol * rho)
    throw BracketFailure("minimize_on_compactum: bisection did not reach the boundary tolerance",
                         lo, hi);
  return make_result(op, f_delta, k, std::move(u_hi), hi, opts.boundary_tol);
}

QuasiResult minimize_nonlinear(const Operator& op, const GridFunction& f_delta, const Compactum& k,
                               const QuasiOptions& opts) {
  if (opts.starts == 0) throw InvalidParameter("minimize_on_compactum: need at least one start");
  const Grid& grid = op.grid();
  const CounterRng rng(opts.seed);

  // (W + nu Q)^{-1} has nonnegative entries, so the metric projection keeps the cone.
  const EllipsoidProjector to_k(k, grid);
  Projection project = [&](const GridFunction& u) {
    return op.positive_domain() ? to_k(clamp_nonnegative(u)) : to_k(u);
  };
  SmoothObjective objective{
      [&](const GridFunction& x) {
        const double r = l2_norm(op.apply(x) - f_delta);
        return 0.5 * r * r;
      },
      [&](const GridFunction& x) { return residual_gradient(op, f_delta, x); }};

  std::optional<ProjectedGradientResult> best;
  bool any_converged = false;
  for (std::size_t s = 0; s < opts.starts; ++s) {
    Eigen::VectorXd v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = 0.5 + rng.uniform(s * grid.size() + i);
    ProjectedGradientResult run =
        projected_gradient(objective, project, GridFunction(grid, std::move(v)), opts.inner);
    any_converged = any_converged || run.converged;
    if (!best || run.value < best->value) best = std::move(run);
  }
  if (!any_converged)
    throw SolverFailure("minimize_on_compactum: projected gradient did not converge within " +
                            std::to_string(opts.inner.max_iter) + " iterations",
                        best->u, std::sqrt(2.0 * best->value));
  return make_result(op, f_delta, k, std::move(best->u), std::nullopt, opts.boundary_tol);
}

}  // namespace

QuasiResult minimize_on_compactum(const Operator& op, const GridFunction& f_delta,
                                  const Compactum& k, const QuasiOptions& opts) {
  if (!(f_delta.grid() == op.grid()))
    throw ContractViolation("minimize_on_compactum: data is not on the operator's grid");
  return op.is_linear() ? minimize_linear(op, f_delta, k, opts)
                        : minimize_nonlinear(op, f_delta, k, opts);
}

void attach_exact_data(QuasiResult& res, const GridFunction& f_exact) {
  res.residual_exact = l2_norm(res.forward - f_exact);
}

QuasiCertificate quasi_thresholds(double residual_noisy, double residual_exact, double delta) {
  if (!(delta > 0.0)) throw InvalidParameter("quasi_certificate: delta must be positive");
  QuasiCertificate cert{};
  cert.tol = 1e-9 * std::max(1.0, delta);
  cert.slack_24 = 2.0 * delta + cert.tol - residual_noisy;
  cert.slack_26 = 3.0 * delta + cert.tol - residual_exact;
  cert.bound_24_ok = cert.slack_24 >= 0.0;
  cert.bound_26_ok = cert.slack_26 >= 0.0;
  return cert;
}

QuasiCertificate quasi_certificate(const QuasiResult& res, const GridFunction& f, double delta) {
  return quasi_thresholds(res.residual_noisy, l2_norm(res.forward - f), delta);
}

}  // namespace illposed
