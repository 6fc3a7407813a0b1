#pragma once

#include <Eigen/Core>

#include "illposed/linalg.hpp"

namespace illposed {

/// Discrete H^1-type stabilizer phi(u) = alpha0 ||u||^2 + alpha1 ||Du||^2.
///
/// D is the forward difference (u_{i+1} - u_i) / h on the n-1 cells; each difference is
/// weighted by the cell width h, which makes ||Du||^2 the exact integral of the squared
/// derivative of the piecewise-linear interpolant. phi is written as ||L u||^2 with L a
/// stacked (identity; difference) operator.
class Stabilizer {
 public:
  explicit Stabilizer(double alpha0 = 1.0, double alpha1 = 1.0);

  double alpha0() const noexcept { return alpha0_; }
  double alpha1() const noexcept { return alpha1_; }
  bool positive_definite() const noexcept { return alpha0_ > 0.0; }

  double value(const GridFunction& u) const;

  /// Coordinate matrix of L, of shape (2n-1) x n, so that phi(u) = |L u|^2 (Euclidean).
  Eigen::MatrixXd stacked_matrix(const Grid& grid) const;
  /// Coordinate matrix Q = L^T L with phi(u) = u^T Q u.
  Eigen::MatrixXd quadratic_form(const Grid& grid) const;
  /// The operator L^*L in the grid inner product, so phi(u) = <gram_apply(u), u>.
  GridFunction gram_apply(const GridFunction& u) const;
  /// Gradient of phi in the grid inner product: 2 L^*L u.
  GridFunction gradient(const GridFunction& u) const;

 private:
  double alpha0_;
  double alpha1_;
};

inline double phi_value(const Stabilizer& stab, const GridFunction& u) { return stab.value(u); }

/// The sublevel ellipsoid K = {u : phi(u) <= rho}.
class Compactum {
 public:
  /// Relative tolerance for boundary membership.
  static constexpr double boundary_tolerance = 1e-12;

  Compactum(Stabilizer stab, double rho);

  const Stabilizer& stabilizer() const noexcept { return stab_; }
  double rho() const noexcept { return rho_; }

  bool contains(const GridFunction& u) const;
  /// Radial projection: u itself when inside, otherwise sqrt(rho / phi(u)) * u.
  GridFunction project(const GridFunction& u) const;

 private:
  Stabilizer stab_;
  double rho_;
};

/// Nearest point of K in the grid norm: argmin ||v - u|| subject to phi(v) <= rho.
///
/// The solution is v = (W + nu Q)^{-1} W u for the multiplier nu >= 0 that puts v on the
/// boundary. The generalized eigenbasis of (Q, W) is computed once per grid so each
/// projection costs two matrix-vector products and a scalar root search. Unlike the radial
/// projection, its fixed points under projected gradient are the KKT points of K.
class EllipsoidProjector {
 public:
  EllipsoidProjector(const Compactum& k, const Grid& grid);

  GridFunction operator()(const GridFunction& u) const;

 private:
  Compactum k_;
  Grid grid_;
  Eigen::VectorXd sqrt_w_;
  Eigen::VectorXd theta_;
  Eigen::MatrixXd basis_;
};

inline bool contains(const Compactum& k, const GridFunction& u) { return k.contains(u); }
inline GridFunction project_onto(const Compactum& k, const GridFunction& u) { return k.project(u); }

}  // namespace illposed
