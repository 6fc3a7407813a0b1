#include "illposed/stabilizer.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace illposed {

Stabilizer::Stabilizer(double alpha0, double alpha1) : alpha0_(alpha0), alpha1_(alpha1) {
  if (!(alpha0 >= 0.0) || !(alpha1 >= 0.0) || !std::isfinite(alpha0) || !std::isfinite(alpha1))
    throw InvalidParameter("Stabilizer: weights must be finite and nonnegative");
  if (alpha0 == 0.0 && alpha1 == 0.0)
    throw InvalidParameter("Stabilizer: alpha0 and alpha1 cannot both be zero");
}

double Stabilizer::value(const GridFunction& u) const {
  const Grid& g = u.grid();
  const Eigen::VectorXd& v = u.values();
  const double h = g.spacing();
  const auto n = v.size();
  double mass = 0.0;
  if (alpha0_ > 0.0) {
    const Eigen::VectorXd w = g.quadrature_weights();
    mass = (w.array() * v.array().square()).sum();
  }
  double stiffness = 0.0;
  if (alpha1_ > 0.0) {
    const Eigen::VectorXd d = (v.tail(n - 1) - v.head(n - 1)) / h;
    stiffness = h * d.squaredNorm();
  }
  return alpha0_ * mass + alpha1_ * stiffness;
}

Eigen::MatrixXd Stabilizer::stacked_matrix(const Grid& grid) const {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double h = grid.spacing();
  const Eigen::VectorXd w = grid.quadrature_weights();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2 * n - 1, n);
  for (Eigen::Index i = 0; i < n; ++i) l(i, i) = std::sqrt(alpha0_ * w[i]);
  const double s = std::sqrt(alpha1_ * h) / h;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    l(n + i, i) = -s;
    l(n + i, i + 1) = s;
  }
  return l;
}

Eigen::MatrixXd Stabilizer::quadratic_form(const Grid& grid) const {
  const Eigen::MatrixXd l = stacked_matrix(grid);
  return l.transpose() * l;
}

GridFunction Stabilizer::gram_apply(const GridFunction& u) const {
  const Grid& g = u.grid();
  const Eigen::VectorXd& v = u.values();
  const auto n = v.size();
  const double h = g.spacing();
  const Eigen::VectorXd w = g.quadrature_weights();

  // Q u = alpha0 W u + alpha1 h D^T D u, then divide by the quadrature weights.
  Eigen::VectorXd qu = alpha0_ * w.cwiseProduct(v);
  if (alpha1_ > 0.0) {
    const Eigen::VectorXd d = (v.tail(n - 1) - v.head(n - 1)) / h;
    const double s = alpha1_;  // alpha1 * h * (1/h) per difference entry
    qu.head(n - 1) -= s * d;
    qu.tail(n - 1) += s * d;
  }
  return GridFunction(g, qu.cwiseQuotient(w));
}

GridFunction Stabilizer::gradient(const GridFunction& u) const { return 2.0 * gram_apply(u); }

Compactum::Compactum(Stabilizer stab, double rho) : stab_(stab), rho_(rho) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw InvalidParameter("Compactum: rho must be positive and finite");
  if (!stab_.positive_definite())
    throw InvalidParameter(
        "Compactum: alpha0 must be positive; a semidefinite stabilizer gives an unbounded set");
}

bool Compactum::contains(const GridFunction& u) const {
  return stab_.value(u) <= rho_ + boundary_tolerance * rho_;
}

GridFunction Compactum::project(const GridFunction& u) const {
  const double phi = stab_.value(u);
  if (phi <= rho_ + boundary_tolerance * rho_) return u;
  return std::sqrt(rho_ / phi) * u;
}

EllipsoidProjector::EllipsoidProjector(const Compactum& k, const Grid& grid)
    : k_(k), grid_(grid), sqrt_w_(grid.quadrature_weights().cwiseSqrt()) {
  const Eigen::VectorXd inv = sqrt_w_.cwiseInverse();
  const Eigen::MatrixXd scaled =
      inv.asDiagonal() * k.stabilizer().quadratic_form(grid) * inv.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled);
  theta_ = eig.eigenvalues().cwiseMax(0.0);
  basis_ = eig.eigenvectors();
}

GridFunction EllipsoidProjector::operator()(const GridFunction& u) const {
  if (!(u.grid() == grid_)) throw ContractViolation("EllipsoidProjector: grid mismatch");
  if (k_.contains(u)) return u;

  const double rho = k_.rho();
  const Eigen::VectorXd z = basis_.transpose() * sqrt_w_.cwiseProduct(u.values());
  auto phi_at = [&](double nu) {
    return (theta_.array() * z.array().square() / (1.0 + nu * theta_.array()).square()).sum();
  };

  double lo = 0.0;
  double hi = 1.0;
  while (phi_at(hi) > rho) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw Error("EllipsoidProjector: multiplier search diverged");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (phi_at(mid) > rho ? lo : hi) = mid;
  }
  const Eigen::VectorXd y = z.cwiseQuotient((1.0 + hi * theta_.array()).matrix());
  GridFunction v(grid_, (basis_ * y).cwiseQuotient(sqrt_w_));
  // Round-off can leave v a few ulps outside; the radial step is then a no-op in practice.
  return k_.project(v);
}

}  // namespace illposed
