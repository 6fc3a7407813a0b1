#include <doctest.h>

#include "illposed/stabilizer.hpp"
#include "test_support.hpp"

using namespace illposed;
using illposed::testing::random_function;
using illposed::testing::random_real;
using illposed::testing::rel_diff;

namespace {

// Independent summation of alpha0 * sum_i w_i u_i^2 + alpha1 * h * sum_i ((u_{i+1}-u_i)/h)^2.
double phi_direct(const GridFunction& u, double alpha0, double alpha1) {
  const std::size_t n = u.size();
  const double h = u.grid().spacing();
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    mass += w * u[i] * u[i];
  }
  double stiff = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = (u[i + 1] - u[i]) / h;
    stiff += h * d * d;
  }
  return alpha0 * mass + alpha1 * stiff;
}

}  // namespace

TEST_SUITE("stabilizer") {
  TEST_CASE("phi of zero and of constants") {
    const Stabilizer stab(1.0, 1.0);
    const Grid g(11);
    CHECK(stab.value(GridFunction(g)) == 0.0);
    const auto c = GridFunction::sample(g, [](double) { return -3.0; });
    CHECK(stab.value(c) == doctest::Approx(9.0).epsilon(1e-14));
  }

  TEST_CASE("phi matches direct summation at n=6") {
    std::mt19937_64 rng(1);
    const Grid g(6);
    for (auto [a0, a1] : {std::pair{1.0, 1.0}, std::pair{0.3, 2.5}, std::pair{0.0, 1.0}}) {
      const GridFunction u = random_function(g, rng);
      CHECK(rel_diff(Stabilizer(a0, a1).value(u), phi_direct(u, a0, a1)) <= 1e-12);
    }
  }

  TEST_CASE("weights are validated") {
    CHECK_THROWS_AS(Stabilizer(0.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(Stabilizer(-1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(Compactum(Stabilizer(0.0, 1.0), 1.0), InvalidParameter);
    CHECK_THROWS_AS(Compactum(Stabilizer(), 0.0), InvalidParameter);
  }

  TEST_CASE("scaling law and quadratic-form consistency") {
    std::mt19937_64 rng(5);
    const Grid g(25);
    const Stabilizer stab(0.7, 1.3);
    const Eigen::MatrixXd q = stab.quadratic_form(g);
    const Eigen::MatrixXd l = stab.stacked_matrix(g);
    CHECK((q - q.transpose()).norm() == 0.0);
    for (int trial = 0; trial < 100; ++trial) {
      const GridFunction u = random_function(g, rng);
      const double t = random_real(rng, -10.0, 10.0);
      const double phi = stab.value(u);
      CHECK(rel_diff(stab.value(t * u), t * t * phi) <= 1e-12);
      CHECK(rel_diff(inner(stab.gram_apply(u), u), phi) <= 1e-12);
      CHECK(rel_diff(u.values().dot(q * u.values()), phi) <= 1e-12);
      CHECK(rel_diff((l * u.values()).squaredNorm(), phi) <= 1e-12);
    }
  }

  TEST_CASE("sublevel sets are bounded uniformly in the mesh size") {
    std::mt19937_64 rng(8);
    const double c = 2.0;
    for (double alpha0 : {1.0, 0.25}) {
      const Stabilizer stab(alpha0, 1.0);
      for (std::size_t n : {8u, 32u, 128u}) {
        const Grid g(n);
        for (int trial = 0; trial < 100; ++trial) {
          GridFunction u = random_function(g, rng, 5.0);
          const double phi = stab.value(u);
          // Any point with phi = s * c for s in (0, 1] is a member of the sublevel set.
          const double s = random_real(rng, 0.01, 1.0);
          u *= std::sqrt(s * c / phi);
          CHECK(stab.value(u) <= c * (1 + 1e-12));
          CHECK(l2_norm(u) <= std::sqrt(c / alpha0) * (1 + 1e-12));
        }
      }
    }
  }

  TEST_CASE("contains: zero, boundary and outside") {
    std::mt19937_64 rng(2);
    const Grid g(9);
    const Stabilizer stab;
    const GridFunction u = random_function(g, rng);
    const double phi = stab.value(u);
    CHECK(Compactum(stab, 0.1).contains(GridFunction(g)));
    CHECK(Compactum(stab, phi).contains(u));
    CHECK_FALSE(Compactum(stab, phi).contains(std::sqrt(2.0) * u));
  }

  TEST_CASE("project_onto") {
    std::mt19937_64 rng(4);
    const Stabilizer stab;
    const Grid g5(5);

    SUBCASE("inside is unchanged") {
      const GridFunction u = random_function(g5, rng);
      const Compactum k(stab, 2.0 * stab.value(u));
      CHECK(project_onto(k, u).values() == u.values());
    }
    SUBCASE("phi = 4 rho halves the point") {
      const GridFunction u = random_function(g5, rng);
      const Compactum k(stab, stab.value(u) / 4.0);
      const GridFunction p = project_onto(k, u);
      CHECK((p.values() - 0.5 * u.values()).cwiseAbs().maxCoeff() <= 1e-15);
      CHECK(rel_diff(stab.value(p), k.rho()) <= 1e-12);
    }
    SUBCASE("random outside points land on the boundary; projection is idempotent") {
      for (int trial = 0; trial < 100; ++trial) {
        const GridFunction u = random_function(g5, rng, 10.0);
        const Compactum k(stab, random_real(rng, 0.01, 0.9) * stab.value(u));
        const GridFunction p = project_onto(k, u);
        CHECK(stab.value(p) >= k.rho() * (1 - 1e-12));
        CHECK(stab.value(p) <= k.rho() * (1 + 1e-12));
        CHECK(project_onto(k, p).values() == p.values());
      }
    }
  }

  TEST_CASE("metric projection satisfies the variational inequality") {
    std::mt19937_64 rng(21);
    const Grid g(12);
    const Stabilizer stab(1.0, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
      const GridFunction u = random_function(g, rng, 4.0);
      const Compactum k(stab, random_real(rng, 0.05, 0.8) * stab.value(u));
      const EllipsoidProjector project(k, g);
      const GridFunction v = project(u);
      CHECK(k.contains(v));
      CHECK(std::abs(stab.value(v) - k.rho()) <= 1e-9 * k.rho());
      // <u - v, w - v> <= 0 for every w in K.
      for (int j = 0; j < 10; ++j) {
        const GridFunction w = project_onto(k, random_function(g, rng, 4.0));
        CHECK(inner(u - v, w - v) <= 1e-10 * l2_norm(u - v) * (l2_norm(w) + l2_norm(v)));
      }
      CHECK(l2_norm(u - v) <= l2_norm(u - project_onto(k, u)) * (1 + 1e-12));
    }
  }
}
