#include "illposed/gallery.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

namespace illposed {

namespace {

constexpr double ill_posed_ratio = 1e3;

GridFunction smooth_profile(const Grid& g) {
  return GridFunction::sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
}

ProblemInstance finish(std::string name, const Grid& g, Operator op, GridFunction y,
                       std::string notes) {
  GridFunction f = op.apply(y);
  return ProblemInstance{std::move(name), g, std::move(op), std::move(y), std::move(f),
                         std::move(notes)};
}

ProblemInstance make_identity(const Grid& g) {
  return finish("identity", g, Operator::diagonal(g, Eigen::VectorXd::Ones(g.size()), true),
                smooth_profile(g), "well-posed baseline; injective trivially");
}

ProblemInstance make_diag_unbounded(const Grid& g) {
  Eigen::VectorXd d(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k = static_cast<double>(i / 2 + 1);
    d[i] = (i % 2 == 0) ? k : 1.0 / k;
  }
  return finish("diag-unbounded", g, Operator::diagonal(g, std::move(d), true), smooth_profile(g),
                "diagonal a_{2k}=k+1, a_{2k+1}=1/(k+1): the largest entry grows and the smallest "
                "shrinks with n, a finite-dimensional model of an unbounded operator with a "
                "discontinuous inverse; injective since every entry is nonzero");
}

ProblemInstance make_volterra(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const double h = g.spacing();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  // Row 0 keeps the half cell h/2 * u_0 so the matrix stays nonsingular.
  m(0, 0) = 0.5 * h;
  for (Eigen::Index i = 1; i < n; ++i) {
    m(i, 0) = 0.5 * h;
    for (Eigen::Index j = 1; j < i; ++j) m(i, j) = h;
    m(i, i) = 0.5 * h;
  }
  return finish("volterra-int", g, Operator::dense(g, std::move(m), true), smooth_profile(g),
                "cumulative trapezoid integration from 0 (row 0 carries the half cell h/2*u_0); "
                "lower triangular with diagonal h/2 > 0, hence injective; inverting it is "
                "numerical differentiation");
}

ProblemInstance make_fredholm(const Grid& g, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("fredholm-gauss: sigma must be positive");
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::VectorXd w = g.quadrature_weights();
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = g.node(static_cast<std::size_t>(i)) - g.node(static_cast<std::size_t>(j));
      m(i, j) = w[j] * std::exp(-r * r / (2.0 * sigma * sigma));
    }
  return finish("fredholm-gauss", g, Operator::dense(g, std::move(m), true), smooth_profile(g),
                "first-kind integral operator with Gaussian kernel, trapezoid quadrature; the "
                "kernel matrix is positive definite, hence injective, but severely "
                "ill-conditioned");
}

ProblemInstance make_autoconv(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const double h = g.spacing();

  // Cell values u_j on [jh, (j+1)h]: (u*u)((i+1)h) = h * sum_{j<=i} u_j u_{i-j}.
  NonlinearMaps maps;
  maps.apply = [n, h](const Eigen::VectorXd& u) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j <= i; ++j) s += u[j] * u[i - j];
      out[i] = h * s;
    }
    return out;
  };
  // dA_i/du_k = 2h u_{i-k} for k <= i.
  maps.jacobian = [n, h](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (Eigen::Index k = 0; k <= i; ++k) s += u[i - k] * v[k];
      out[i] = 2.0 * h * s;
    }
    return out;
  };
  maps.jacobian_transpose = [n, h](const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      double s = 0.0;
      for (Eigen::Index i = k; i < n; ++i) s += u[i - k] * w[i];
      out[k] = 2.0 * h * s;
    }
    return out;
  };
  auto y = GridFunction::sample(g, [](double x) { return 1.0 + x * (1.0 - x); });
  return finish("autoconv", g, Operator::nonlinear(g, std::move(maps), true, true), std::move(y),
                "autoconvolution of the piecewise-constant function with cell values u_j, "
                "evaluated at the cell ends; the system is triangular (A_0 = h u_0^2, "
                "A_i = 2h u_0 u_i + terms in u_1..u_{i-1}), so it is injective on the "
                "positive cone only");
}

}  // namespace

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"diag-unbounded", "volterra-int", "fredholm-gauss",
                                              "autoconv", "identity"};
  return names;
}

ProblemInstance build_problem(const std::string& name, std::size_t n, const ProblemParams& params) {
  const std::size_t min_n = name == "diag-unbounded" ? 3 : 4;
  auto make_grid = [&] {
    if (n < min_n)
      throw InvalidParameter("build_problem: " + name + " needs n >= " + std::to_string(min_n));
    return Grid(n, 0.0, 1.0);
  };
  if (name == "diag-unbounded") return make_diag_unbounded(make_grid());
  if (name == "volterra-int") return make_volterra(make_grid());
  if (name == "fredholm-gauss") return make_fredholm(make_grid(), params.sigma);
  if (name == "autoconv") return make_autoconv(make_grid());
  if (name == "identity") return make_identity(make_grid());

  std::string valid;
  for (const auto& s : problem_names()) valid += (valid.empty() ? "" : ", ") + s;
  throw ConfigError("unknown problem '" + name + "'; valid names: " + valid);
}

ConditionReport condition_report(const ProblemInstance& p) {
  if (!p.op.is_linear())
    throw Unsupported("condition_report: " + p.name + " is nonlinear");
  const Eigen::VectorXd sw = p.grid.quadrature_weights().cwiseSqrt();
  const Eigen::MatrixXd scaled = sw.asDiagonal() * p.op.matrix() * sw.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& s = svd.singularValues();
  const double smax = s[0];
  const double smin = s[s.size() - 1];
  const double ratio = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  return ConditionReport{smax, smin, ratio, ratio > ill_posed_ratio};
}

}  // namespace illposed
