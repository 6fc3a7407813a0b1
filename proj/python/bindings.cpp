#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "illposed/cli.hpp"
#include "illposed/gallery.hpp"
#include "illposed/linalg.hpp"
#include "illposed/quasisolution.hpp"
#include "illposed/stabilizer.hpp"
#include "illposed/sweep.hpp"
#include "illposed/variational.hpp"

namespace py = pybind11;
using namespace illposed;

namespace {

GridFunction on(const Grid& g, const Eigen::VectorXd& v) { return GridFunction(g, v); }

}  // namespace

PYBIND11_MODULE(_illposed, m) {
  m.doc() = "Variational regularization and quasisolutions for ill-posed operator equations.";

  py::register_exception<Error>(m, "Error");

  py::class_<Grid>(m, "Grid")
      .def(py::init<std::size_t, double, double>(), py::arg("n"), py::arg("a") = 0.0,
           py::arg("b") = 1.0)
      .def_property_readonly("n", &Grid::size)
      .def_property_readonly("a", &Grid::a)
      .def_property_readonly("b", &Grid::b)
      .def_property_readonly("h", &Grid::spacing)
      .def("nodes", &Grid::nodes);

  m.def("l2_norm", [](const Grid& g, const Eigen::VectorXd& v) { return l2_norm(g, on(g, v)); },
        py::arg("grid"), py::arg("v"));

  py::class_<Stabilizer>(m, "Stabilizer")
      .def(py::init<double, double>(), py::arg("alpha0") = 1.0, py::arg("alpha1") = 1.0)
      .def_property_readonly("alpha0", &Stabilizer::alpha0)
      .def_property_readonly("alpha1", &Stabilizer::alpha1)
      .def("phi", [](const Stabilizer& s, const Grid& g,
                     const Eigen::VectorXd& u) { return s.value(on(g, u)); });

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("sigma_max", &ConditionReport::sigma_max)
      .def_readonly("sigma_min", &ConditionReport::sigma_min)
      .def_readonly("ratio", &ConditionReport::ratio)
      .def_readonly("ill_posed", &ConditionReport::ill_posed);

  py::class_<ProblemInstance>(m, "Problem")
      .def_readonly("name", &ProblemInstance::name)
      .def_readonly("grid", &ProblemInstance::grid)
      .def_readonly("notes", &ProblemInstance::notes)
      .def_property_readonly("linear", [](const ProblemInstance& p) { return p.op.is_linear(); })
      .def_property_readonly("y_true",
                             [](const ProblemInstance& p) { return p.y_true.values(); })
      .def_property_readonly("f_exact",
                             [](const ProblemInstance& p) { return p.f_exact.values(); })
      .def("apply",
           [](const ProblemInstance& p, const Eigen::VectorXd& u) {
             return p.op.apply(on(p.grid, u)).values();
           })
      .def("matrix", [](const ProblemInstance& p) { return p.op.matrix(); })
      .def("condition_report", [](const ProblemInstance& p) { return condition_report(p); });

  m.def("build_problem",
        [](const std::string& name, std::size_t n, double sigma) {
          return build_problem(name, n, ProblemParams{sigma});
        },
        py::arg("name"), py::arg("n"), py::arg("sigma") = 0.1);
  m.def("problem_names", &problem_names);

  m.def("inject_noise",
        [](const ProblemInstance& p, double delta, std::uint64_t seed, const std::string& mode) {
          return inject_noise(p.grid, p.f_exact, delta, seed, parse_noise_mode(mode))
              .f_delta.values();
        },
        py::arg("problem"), py::arg("delta"), py::arg("seed"), py::arg("mode") = "exact-norm");

  py::class_<VariationalResult>(m, "VariationalResult")
      .def_property_readonly("u_delta",
                             [](const VariationalResult& r) { return r.u_delta.values(); })
      .def_readonly("F_value", &VariationalResult::F_value)
      .def_readonly("residual_noisy", &VariationalResult::residual_noisy)
      .def_readonly("residual_exact", &VariationalResult::residual_exact)
      .def_readonly("phi_u", &VariationalResult::phi_u)
      .def_readonly("lambda_star", &VariationalResult::lambda_star)
      .def_readonly("m_hat", &VariationalResult::m_hat);

  py::class_<VariationalCertificate>(m, "VariationalCertificate")
      .def_readonly("c1", &VariationalCertificate::c1)
      .def_readonly("c", &VariationalCertificate::c)
      .def_readonly("bound_18_ok", &VariationalCertificate::bound_18_ok)
      .def_readonly("bound_19_ok", &VariationalCertificate::bound_19_ok)
      .def_readonly("bound_110_ok", &VariationalCertificate::bound_110_ok)
      .def_readonly("slack_18", &VariationalCertificate::slack_18)
      .def_readonly("slack_19", &VariationalCertificate::slack_19)
      .def_readonly("slack_110", &VariationalCertificate::slack_110)
      .def("all_ok", &VariationalCertificate::all_ok);

  py::class_<QuasiResult>(m, "QuasiResult")
      .def_property_readonly("u_delta", [](const QuasiResult& r) { return r.u_delta.values(); })
      .def_readonly("residual_noisy", &QuasiResult::residual_noisy)
      .def_readonly("residual_exact", &QuasiResult::residual_exact)
      .def_readonly("phi_u", &QuasiResult::phi_u)
      .def_readonly("mu_hat", &QuasiResult::mu_hat)
      .def_readonly("on_boundary", &QuasiResult::on_boundary)
      .def_readonly("lambda_star", &QuasiResult::lambda_star);

  py::class_<QuasiCertificate>(m, "QuasiCertificate")
      .def_readonly("bound_24_ok", &QuasiCertificate::bound_24_ok)
      .def_readonly("bound_26_ok", &QuasiCertificate::bound_26_ok)
      .def_readonly("slack_24", &QuasiCertificate::slack_24)
      .def_readonly("slack_26", &QuasiCertificate::slack_26)
      .def("all_ok", &QuasiCertificate::all_ok);

  m.def("f_functional",
        [](const ProblemInstance& p, const Eigen::VectorXd& f_delta, double delta,
           const Stabilizer& stab, const Eigen::VectorXd& u) {
          return f_functional(p.op, on(p.grid, f_delta), delta, stab, on(p.grid, u));
        },
        py::arg("problem"), py::arg("f_delta"), py::arg("delta"), py::arg("stabilizer"),
        py::arg("u"));

  m.def("tikhonov_point",
        [](const ProblemInstance& p, const Stabilizer& stab, const Eigen::VectorXd& f_delta,
           double lambda) { return tikhonov_point(p.op, stab, on(p.grid, f_delta), lambda).values(); },
        py::arg("problem"), py::arg("stabilizer"), py::arg("f_delta"), py::arg("lam"));

  m.def("minimize_variational",
        [](const ProblemInstance& p, const Eigen::VectorXd& f_delta, double delta,
           const Stabilizer& stab, std::uint64_t seed) {
          VariationalOptions opts;
          opts.seed = seed;
          VariationalResult r = minimize_variational(p.op, on(p.grid, f_delta), delta, stab, opts);
          attach_exact_data(r, p.f_exact);
          return r;
        },
        py::arg("problem"), py::arg("f_delta"), py::arg("delta"),
        py::arg("stabilizer") = Stabilizer{}, py::arg("seed") = 0);

  m.def("variational_certificate",
        [](const VariationalResult& r, const ProblemInstance& p, const Stabilizer& stab,
           double delta) { return variational_certificate(r, p, stab, delta); },
        py::arg("result"), py::arg("problem"), py::arg("stabilizer"), py::arg("delta"));

  m.def("minimize_on_compactum",
        [](const ProblemInstance& p, const Eigen::VectorXd& f_delta, double rho,
           const Stabilizer& stab, std::uint64_t seed) {
          QuasiOptions opts;
          opts.seed = seed;
          QuasiResult r =
              minimize_on_compactum(p.op, on(p.grid, f_delta), Compactum(stab, rho), opts);
          attach_exact_data(r, p.f_exact);
          return r;
        },
        py::arg("problem"), py::arg("f_delta"), py::arg("rho"),
        py::arg("stabilizer") = Stabilizer{}, py::arg("seed") = 0);

  m.def("quasi_certificate",
        [](const QuasiResult& r, const ProblemInstance& p, double delta) {
          return quasi_certificate(r, p.f_exact, delta);
        },
        py::arg("result"), py::arg("problem"), py::arg("delta"));

  m.def("run_sweep",
        [](const std::map<std::string, std::string>& settings) {
          SweepConfig cfg;
          for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
          const SweepReport report = run_sweep(cfg);
          std::ostringstream csv;
          write_report_csv(csv, report);
          return py::make_tuple(csv.str(), exit_code(report));
        },
        py::arg("settings"),
        "Runs a sweep from CLI-style settings; returns (csv_text, exit_code).");

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = run_cli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
