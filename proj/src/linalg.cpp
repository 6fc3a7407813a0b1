#include "illposed/linalg.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace illposed {

Grid::Grid(std::size_t n, double a, double b) : n_(n), a_(a), b_(b), h_(0.0) {
  if (n < 2) throw InvalidParameter("Grid: need at least 2 nodes, got " + std::to_string(n));
  if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a))
    throw InvalidParameter("Grid: interval endpoints must be finite with b > a");
  h_ = (b - a) / static_cast<double>(n - 1);
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
  return x;
}

Eigen::VectorXd Grid::quadrature_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n_, h_);
  w[0] *= 0.5;
  w[n_ - 1] *= 0.5;
  return w;
}

GridFunction::GridFunction(const Grid& grid)
    : grid_(grid), values_(Eigen::VectorXd::Zero(grid.size())) {}

GridFunction::GridFunction(const Grid& grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size())
    throw ContractViolation("GridFunction: " + std::to_string(values_.size()) +
                            " values for a grid of " + std::to_string(grid_.size()) + " nodes");
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw NumericalDomainError("GridFunction: non-finite value at index " + std::to_string(i),
                                 static_cast<std::size_t>(i));
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_grid(*this, other, "operator+=");
  values_ += other.values_;
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_grid(*this, other, "operator-=");
  values_ -= other.values_;
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  values_ *= s;
  return *this;
}

void require_same_grid(const GridFunction& u, const GridFunction& v, const char* where) {
  if (!(u.grid() == v.grid()))
    throw ContractViolation(std::string(where) + ": grid functions live on different grids");
}

double inner(const GridFunction& u, const GridFunction& v) {
  require_same_grid(u, v, "inner");
  const Eigen::VectorXd w = u.grid().quadrature_weights();
  return (w.array() * u.values().array() * v.values().array()).sum();
}

double l2_norm(const Grid& g, const GridFunction& v) {
  if (!(g == v.grid())) throw ContractViolation("l2_norm: vector is attached to a different grid");
  const Eigen::VectorXd w = g.quadrature_weights();
  return std::sqrt((w.array() * v.values().array().square()).sum());
}

// ---------------------------------------------------------------------------------------------

Operator::Operator(OperatorKind kind, const Grid& grid, bool injective, bool positive_domain)
    : kind_(kind), grid_(grid), injective_(injective), positive_domain_(positive_domain) {}

Operator Operator::dense(const Grid& grid, Eigen::MatrixXd matrix, bool injective) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (matrix.rows() != n || matrix.cols() != n)
    throw ContractViolation("Operator::dense: matrix shape does not match the grid");
  Operator op(OperatorKind::linear_dense, grid, injective, false);
  op.matrix_ = std::make_shared<const Eigen::MatrixXd>(std::move(matrix));
  return op;
}

Operator Operator::diagonal(const Grid& grid, Eigen::VectorXd diagonal, bool injective) {
  if (static_cast<std::size_t>(diagonal.size()) != grid.size())
    throw ContractViolation("Operator::diagonal: diagonal length does not match the grid");
  Operator op(OperatorKind::linear_diagonal, grid, injective, false);
  op.diagonal_ = std::make_shared<const Eigen::VectorXd>(std::move(diagonal));
  return op;
}

Operator Operator::nonlinear(const Grid& grid, NonlinearMaps maps, bool injective,
                             bool positive_domain) {
  if (!maps.apply || !maps.jacobian || !maps.jacobian_transpose)
    throw ContractViolation("Operator::nonlinear: apply, jacobian and jacobian_transpose required");
  Operator op(OperatorKind::nonlinear, grid, injective, positive_domain);
  op.maps_ = std::make_shared<const NonlinearMaps>(std::move(maps));
  return op;
}

void Operator::check_input(const GridFunction& u, const char* where) const {
  if (!(u.grid() == grid_))
    throw ContractViolation(std::string(where) + ": argument is not on the operator's grid");
}

namespace {

GridFunction checked_output(const Grid& grid, Eigen::VectorXd values, const char* where) {
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw NumericalDomainError(std::string(where) + ": non-finite output at index " +
                                     std::to_string(i),
                                 static_cast<std::size_t>(i));
  return GridFunction(grid, std::move(values));
}

}  // namespace

GridFunction Operator::apply(const GridFunction& u) const {
  check_input(u, "Operator::apply");
  switch (kind_) {
    case OperatorKind::linear_dense:
      return checked_output(grid_, (*matrix_) * u.values(), "Operator::apply");
    case OperatorKind::linear_diagonal:
      return checked_output(grid_, diagonal_->cwiseProduct(u.values()), "Operator::apply");
    case OperatorKind::nonlinear:
      return checked_output(grid_, maps_->apply(u.values()), "Operator::apply");
  }
  throw Error("Operator::apply: unknown kind");
}

GridFunction Operator::adjoint_apply(const GridFunction& v) const {
  check_input(v, "Operator::adjoint_apply");
  switch (kind_) {
    case OperatorKind::linear_dense: {
      const Eigen::VectorXd w = grid_.quadrature_weights();
      Eigen::VectorXd out = matrix_->transpose() * w.cwiseProduct(v.values());
      return checked_output(grid_, out.cwiseQuotient(w), "Operator::adjoint_apply");
    }
    case OperatorKind::linear_diagonal:
      return checked_output(grid_, diagonal_->cwiseProduct(v.values()), "Operator::adjoint_apply");
    case OperatorKind::nonlinear:
      break;
  }
  throw ContractViolation("Operator::adjoint_apply: nonlinear operators have no adjoint");
}

GridFunction Operator::jacobian_apply(const GridFunction& u, const GridFunction& v) const {
  check_input(u, "Operator::jacobian_apply");
  check_input(v, "Operator::jacobian_apply");
  if (is_linear()) return apply(v);
  return checked_output(grid_, maps_->jacobian(u.values(), v.values()), "Operator::jacobian_apply");
}

GridFunction Operator::jacobian_adjoint_apply(const GridFunction& u, const GridFunction& w) const {
  check_input(u, "Operator::jacobian_adjoint_apply");
  check_input(w, "Operator::jacobian_adjoint_apply");
  if (is_linear()) return adjoint_apply(w);
  const Eigen::VectorXd q = grid_.quadrature_weights();
  Eigen::VectorXd out = maps_->jacobian_transpose(u.values(), q.cwiseProduct(w.values()));
  return checked_output(grid_, out.cwiseQuotient(q), "Operator::jacobian_adjoint_apply");
}

Eigen::MatrixXd Operator::matrix() const {
  switch (kind_) {
    case OperatorKind::linear_dense:
      return *matrix_;
    case OperatorKind::linear_diagonal:
      return diagonal_->asDiagonal();
    case OperatorKind::nonlinear:
      break;
  }
  throw ContractViolation("Operator::matrix: nonlinear operators have no matrix");
}

const Eigen::VectorXd& Operator::diagonal_entries() const {
  if (kind_ != OperatorKind::linear_diagonal)
    throw ContractViolation("Operator::diagonal_entries: operator is not diagonal");
  return *diagonal_;
}

// ---------------------------------------------------------------------------------------------

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  // splitmix64 finalizer applied to a Weyl sequence position.
  std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t k) const noexcept {
  const double u1 = uniform(2 * k);
  const double u2 = uniform(2 * k + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

NoiseMode parse_noise_mode(const std::string& s) {
  if (s == "exact-norm" || s == "exact_norm") return NoiseMode::exact_norm;
  if (s == "bounded") return NoiseMode::bounded;
  throw InvalidParameter("unknown noise mode '" + s + "' (expected exact-norm or bounded)");
}

std::string to_string(NoiseMode mode) {
  return mode == NoiseMode::exact_norm ? "exact-norm" : "bounded";
}

NoisyData inject_noise(const Grid& g, const GridFunction& f, double delta, std::uint64_t seed,
                       NoiseMode mode) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidParameter("inject_noise: delta must be a positive finite number");
  if (!(g == f.grid())) throw ContractViolation("inject_noise: f is attached to a different grid");

  const CounterRng rng(seed);
  const std::size_t n = g.size();
  Eigen::VectorXd direction(n);
  for (std::size_t i = 0; i < n; ++i) direction[i] = rng.normal(i);
  const double norm = l2_norm(g, GridFunction(g, direction));

  double target = delta;
  // The counters [0, 2n) feed the direction; the bounded-mode magnitude uses the next one.
  if (mode == NoiseMode::bounded) target = delta * rng.uniform(2 * n);

  Eigen::VectorXd f_delta = f.values() + (target / norm) * direction;

  // Rounding in f + e shifts the realized norm by O(ulp(f) / delta) relative. Re-solve the
  // component where f is smallest (finest float spacing) so the realized norm hits target.
  const Eigen::VectorXd w = g.quadrature_weights();
  Eigen::Index j = 0;
  f.values().cwiseAbs().minCoeff(&j);
  const Eigen::VectorXd d = f_delta - f.values();
  const double rest = w.dot(d.cwiseProduct(d)) - w[j] * d[j] * d[j];
  const double dj_sq = (target * target - rest) / w[j];
  if (dj_sq > 0.0) f_delta[j] = f.values()[j] + std::copysign(std::sqrt(dj_sq), direction[j]);
  return NoisyData{GridFunction(g, std::move(f_delta)), delta, seed, mode};
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const GridFunction& v) {
  for (std::size_t i = 0; i < v.size(); ++i) os << format_double(v[i]) << '\n';
}

GridFunction read_csv(std::istream& is, const Grid& grid) {
  Eigen::VectorXd values(grid.size());
  std::size_t count = 0;
  std::string line;
  while (std::getline(is, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    if (count >= grid.size()) throw ContractViolation("read_csv: more values than grid nodes");
    double x = 0.0;
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    auto [ptr, ec] = std::from_chars(begin, end, x);
    if (ec != std::errc() || ptr != end)
      throw InvalidParameter("read_csv: cannot parse '" + line + "' as a number");
    values[static_cast<Eigen::Index>(count++)] = x;
  }
  if (count != grid.size())
    throw ContractViolation("read_csv: expected " + std::to_string(grid.size()) + " values, got " +
                            std::to_string(count));
  return GridFunction(grid, std::move(values));
}

}  // namespace illposed
