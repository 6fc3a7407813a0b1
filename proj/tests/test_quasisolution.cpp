#include <doctest.h>

#include "illposed/gallery.hpp"
#include "illposed/oracle.hpp"
#include "illposed/quasisolution.hpp"
#include "illposed/variational.hpp"
#include "test_support.hpp"

using namespace illposed;
using illposed::testing::rel_diff;

TEST_SUITE("quasisolution") {
  TEST_CASE("identity with feasible data returns the data") {
    const auto p = build_problem("identity", 16);
    const Stabilizer stab;
    const NoisyData d = inject_noise(p.grid, p.f_exact, 1e-2, 3);
    const Compactum k(stab, 2.0 * stab.value(d.f_delta));
    const auto res = minimize_on_compactum(p.op, d.f_delta, k);
    CHECK(res.residual_noisy <= 1e-14);
    CHECK(res.lambda_star == 0.0);
    CHECK_FALSE(res.on_boundary);
  }

  TEST_CASE("identity with L = I and infeasible data gives the radial point") {
    const auto p = build_problem("identity", 16);
    const Stabilizer stab(1.0, 0.0);
    const GridFunction f = 3.0 * p.f_exact;
    const Compactum k(stab, 0.5);
    const auto res = minimize_on_compactum(p.op, f, k);
    const GridFunction expected = (std::sqrt(k.rho()) / l2_norm(f)) * f;
    CHECK(l2_norm(res.u_delta - expected) <= 1e-9 * l2_norm(expected));
    CHECK(std::abs(stab.value(res.u_delta) - k.rho()) <= 1e-10 * k.rho());
    CHECK(res.on_boundary);
    REQUIRE(res.lambda_star.has_value());
    CHECK(*res.lambda_star > 0.0);
  }

  TEST_CASE("volterra-int residual stays within twice the noise level") {
    const auto p = build_problem("volterra-int", 64);
    const Stabilizer stab;
    const double delta = 1e-2;
    const NoisyData d = inject_noise(p.grid, p.f_exact, delta, 42);
    const Compactum k(stab, 1.5 * stab.value(p.y_true));
    const auto res = minimize_on_compactum(p.op, d.f_delta, k);
    CHECK(res.residual_noisy <= 2 * delta);
    CHECK(res.mu_hat <= res.residual_noisy);
    CHECK(k.contains(res.u_delta));
  }

  TEST_CASE("certificate thresholds") {
    const double delta = 1e-2;
    CHECK(quasi_thresholds(1.9 * delta, 2.8 * delta, delta).all_ok());
    CHECK(quasi_thresholds(0.0, delta, delta).all_ok());
    const auto c = quasi_thresholds(2.1 * delta, 2.0 * delta, delta);
    CHECK_FALSE(c.bound_24_ok);
    CHECK(c.bound_26_ok);
    CHECK_FALSE(quasi_thresholds(0.0, 3.1 * delta, delta).bound_26_ok);
  }

  TEST_CASE("interpolating solution passes both bounds") {
    const auto p = build_problem("diag-unbounded", 32);
    const Stabilizer stab;
    const double delta = 1e-3;
    const NoisyData d = inject_noise(p.grid, p.f_exact, delta, 42);
    const Compactum k(stab, 1e6);
    const auto res = minimize_on_compactum(p.op, d.f_delta, k);
    CHECK(res.residual_noisy <= 1e-13);
    CHECK(quasi_certificate(res, p.f_exact, delta).all_ok());
  }

  TEST_CASE("a compactum that excludes y is detected") {
    const auto p = build_problem("diag-unbounded", 64);
    const Stabilizer stab;
    const Compactum k(stab, 0.5 * stab.value(p.y_true));
    CHECK_FALSE(k.contains(p.y_true));
    bool any_failed = false;
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const NoisyData d = inject_noise(p.grid, p.f_exact, delta, 42);
      const auto res = minimize_on_compactum(p.op, d.f_delta, k);
      any_failed = any_failed || !quasi_certificate(res, p.f_exact, delta).bound_24_ok;
    }
    CHECK(any_failed);
  }

  TEST_CASE("feasibility, mu bound and complementarity across the gallery") {
    const Stabilizer stab;
    for (const char* name : {"diag-unbounded", "volterra-int", "fredholm-gauss"}) {
      const auto p = build_problem(name, 64);
      const Compactum k(stab, 1.5 * stab.value(p.y_true));
      for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const NoisyData d = inject_noise(p.grid, p.f_exact, delta, 42);
        auto res = minimize_on_compactum(p.op, d.f_delta, k);
        CHECK(stab.value(res.u_delta) <= k.rho() * (1 + 1e-12));
        CHECK(res.mu_hat <= delta + 1e-9);
        REQUIRE(res.lambda_star.has_value());
        if (*res.lambda_star == 0.0)
          CHECK(res.phi_u < k.rho());
        else
          CHECK(std::abs(res.phi_u - k.rho()) <= 1e-10 * k.rho());
        attach_exact_data(res, p.f_exact);
        CHECK(quasi_certificate(res, p.f_exact, delta).all_ok());
      }
    }
  }

  TEST_CASE("matches brute force over K on a 3-node problem") {
    const auto p = build_problem("diag-unbounded", 3);
    const Stabilizer stab;
    const double delta = 1e-1;
    const NoisyData d = inject_noise(p.grid, p.f_exact, delta, 42);
    const Compactum k(stab, 0.8 * stab.value(p.y_true));
    const auto res = minimize_on_compactum(p.op, d.f_delta, k);

    const Eigen::VectorXd bound = (k.rho() / p.grid.quadrature_weights().array()).sqrt();
    const auto best = oracle::brute_force_refined(
        [&](const Eigen::VectorXd& x) {
          const GridFunction u(p.grid, x);
          if (!k.contains(u)) return std::numeric_limits<double>::infinity();
          return l2_norm(p.op.apply(u) - d.f_delta);
        },
        oracle::SearchBox{-bound, bound, 61}, 6);
    CHECK(best.value >= res.residual_noisy - 1e-9);
    CHECK(best.value - res.residual_noisy <= 1e-6);
  }

  TEST_CASE("bisection budget exhaustion raises BracketFailure") {
    const auto p = build_problem("volterra-int", 32);
    const Stabilizer stab;
    QuasiOptions opts;
    opts.max_bisection = 2;
    const NoisyData d = inject_noise(p.grid, p.f_exact, 1e-2, 42);
    CHECK_THROWS_AS(minimize_on_compactum(p.op, d.f_delta, Compactum(stab, stab.value(p.y_true)), opts),
                    BracketFailure);
  }

  TEST_CASE("nonlinear autoconvolution on the compactum") {
    const auto p = build_problem("autoconv", 32);
    const Stabilizer stab;
    const Compactum k(stab, 1.5 * stab.value(p.y_true));
    for (double delta : {1e-1, 1e-2}) {
      const NoisyData d = inject_noise(p.grid, p.f_exact, delta, 42);
      const auto res = minimize_on_compactum(p.op, d.f_delta, k);
      CHECK(k.contains(res.u_delta));
      CHECK(res.u_delta.values().minCoeff() >= 0.0);
      CHECK_FALSE(res.lambda_star.has_value());
      CHECK(quasi_certificate(res, p.f_exact, delta).all_ok());
    }
  }
}
