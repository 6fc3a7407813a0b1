#pragma once

#include <cstdint>
#include <optional>

#include "illposed/linalg.hpp"
#include "illposed/projected_gradient.hpp"
#include "illposed/stabilizer.hpp"

namespace illposed {

/// The multiplier bisection could not bracket or resolve the constraint phi(u) = rho.
class BracketFailure : public Error {
 public:
  BracketFailure(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  double lambda_lo() const noexcept { return lo_; }
  double lambda_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

struct QuasiOptions {
  double lambda_lo = 1e-14;
  double lambda_hi = 1e14;
  std::size_t max_bisection = 200;
  /// Boundary solutions satisfy |phi(u) - rho| <= boundary_tol * rho.
  double boundary_tol = 1e-10;

  std::size_t starts = 5;
  std::uint64_t seed = 0;
  ProjectedGradientOptions inner;
};

struct QuasiResult {
  GridFunction u_delta;
  GridFunction forward;
  double residual_noisy;
  std::optional<double> residual_exact;
  double phi_u;
  /// Smallest residual found.
  double mu_hat;
  bool on_boundary;
  /// Multiplier of the constraint, linear operators only.
  std::optional<double> lambda_star;
};

/// Minimizes ||A(u) - f_delta|| over the compactum K.
///
/// Linear operators: the unconstrained least-squares point if it lies in K, otherwise the
/// Tikhonov point whose multiplier lambda* > 0 puts it on the boundary phi = rho, found by
/// geometric bisection (phi(u_lambda) is decreasing in lambda). Nonlinear operators:
/// multi-start projected gradient on 1/2 ||A(u) - f_delta||^2 with the metric projection
/// onto K (after clamping to the nonnegative cone when the operator requires it).
QuasiResult minimize_on_compactum(const Operator& op, const GridFunction& f_delta,
                                  const Compactum& k, const QuasiOptions& opts = {});

void attach_exact_data(QuasiResult& res, const GridFunction& f_exact);

struct QuasiCertificate {
  double tol;
  bool bound_24_ok;  // ||A(u_delta) - f_delta|| <= 2 delta
  bool bound_26_ok;  // ||A(u_delta) - f|| <= 3 delta
  double slack_24;
  double slack_26;

  bool all_ok() const noexcept { return bound_24_ok && bound_26_ok; }
};

/// Checks the discrepancy bounds against the exact data f.
QuasiCertificate quasi_certificate(const QuasiResult& res, const GridFunction& f, double delta);

/// The same thresholds from the two residuals alone.
QuasiCertificate quasi_thresholds(double residual_noisy, double residual_exact, double delta);

}  // namespace illposed
