#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "illposed/error.hpp"

namespace illposed {

/// Uniform grid on [a, b] with n nodes, x_i = a + i*h.
class Grid {
 public:
  Grid(std::size_t n, double a = 0.0, double b = 1.0);

  std::size_t size() const noexcept { return n_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double spacing() const noexcept { return h_; }
  double node(std::size_t i) const noexcept { return a_ + static_cast<double>(i) * h_; }
  Eigen::VectorXd nodes() const;

  /// Trapezoid quadrature weights scaled by h, so that <u, v> = sum_i w_i u_i v_i.
  Eigen::VectorXd quadrature_weights() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
  double a_;
  double b_;
  double h_;
};

/// A vector of nodal values attached to a grid; an element of the discretized L^2(a, b).
class GridFunction {
 public:
  explicit GridFunction(const Grid& grid);
  GridFunction(const Grid& grid, Eigen::VectorXd values);

  template <class F>
  static GridFunction sample(const Grid& grid, F&& f) {
    Eigen::VectorXd v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
    return GridFunction(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s);

  friend GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
  friend GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
  friend GridFunction operator*(double s, GridFunction v) { return v *= s; }
  friend GridFunction operator*(GridFunction v, double s) { return v *= s; }

 private:
  Grid grid_;
  Eigen::VectorXd values_;
};

/// Throws ContractViolation unless both functions live on the same grid.
void require_same_grid(const GridFunction& u, const GridFunction& v, const char* where);

/// Trapezoid-weighted inner product h * sum_i w_i u_i v_i.
double inner(const GridFunction& u, const GridFunction& v);

/// sqrt(h * sum_i w_i v_i^2).
double l2_norm(const Grid& g, const GridFunction& v);
inline double l2_norm(const GridFunction& v) { return l2_norm(v.grid(), v); }

enum class OperatorKind { linear_dense, linear_diagonal, nonlinear };

/// Maps defining a nonlinear operator. The Jacobian maps receive the base point first.
struct NonlinearMaps {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> jacobian;
  /// Transpose of the coordinate Jacobian applied to a vector.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> jacobian_transpose;
};

/// The forward operator A of A(u) = f.
///
/// Linear operators are stored as a coordinate matrix (dense) or a diagonal. Adjoints are
/// taken with respect to the trapezoid inner product, so for a coordinate matrix M the
/// adjoint is W^{-1} M^T W.
class Operator {
 public:
  static Operator dense(const Grid& grid, Eigen::MatrixXd matrix, bool injective);
  static Operator diagonal(const Grid& grid, Eigen::VectorXd diagonal, bool injective);
  static Operator nonlinear(const Grid& grid, NonlinearMaps maps, bool injective,
                            bool positive_domain);

  OperatorKind kind() const noexcept { return kind_; }
  bool is_linear() const noexcept { return kind_ != OperatorKind::nonlinear; }
  bool injective() const noexcept { return injective_; }
  /// The operator is only meaningful (injective) on the cone of nonnegative functions.
  bool positive_domain() const noexcept { return positive_domain_; }
  const Grid& grid() const noexcept { return grid_; }

  GridFunction apply(const GridFunction& u) const;
  GridFunction adjoint_apply(const GridFunction& v) const;
  /// Directional derivative A'(u) v. For linear operators this is A v.
  GridFunction jacobian_apply(const GridFunction& u, const GridFunction& v) const;
  /// Adjoint of A'(u) in the grid inner product.
  GridFunction jacobian_adjoint_apply(const GridFunction& u, const GridFunction& w) const;

  /// Coordinate matrix of a linear operator.
  Eigen::MatrixXd matrix() const;
  /// Stored diagonal of a linear-diagonal operator.
  const Eigen::VectorXd& diagonal_entries() const;

 private:
  Operator(OperatorKind kind, const Grid& grid, bool injective, bool positive_domain);

  void check_input(const GridFunction& u, const char* where) const;

  OperatorKind kind_;
  Grid grid_;
  bool injective_;
  bool positive_domain_ = false;
  std::shared_ptr<const Eigen::MatrixXd> matrix_;
  std::shared_ptr<const Eigen::VectorXd> diagonal_;
  std::shared_ptr<const NonlinearMaps> maps_;
};

/// Counter-based generator: the k-th draw depends only on (seed, k).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t bits(std::uint64_t counter) const noexcept;
  /// Uniform in (0, 1].
  double uniform(std::uint64_t counter) const noexcept;
  /// Standard normal via Box-Muller on counters 2k and 2k+1.
  double normal(std::uint64_t k) const noexcept;

 private:
  std::uint64_t seed_;
};

enum class NoiseMode { exact_norm, bounded };

NoiseMode parse_noise_mode(const std::string& s);
std::string to_string(NoiseMode mode);

struct NoisyData {
  GridFunction f_delta;
  double delta;
  std::uint64_t seed;
  NoiseMode mode;
};

/// Perturbs f by a seeded Gaussian direction rescaled to norm delta (exact_norm) or to a
/// norm drawn uniformly from (0, delta] (bounded).
NoisyData inject_noise(const Grid& g, const GridFunction& f, double delta, std::uint64_t seed,
                       NoiseMode mode = NoiseMode::exact_norm);

/// One value per line, shortest round-trip decimal representation.
void write_csv(std::ostream& os, const GridFunction& v);
GridFunction read_csv(std::istream& is, const Grid& grid);

/// Shortest decimal string that parses back to the same double; always uses '.'.
std::string format_double(double x);

}  // namespace illposed
