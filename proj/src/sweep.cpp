#include "illposed/sweep.hpp"

#include <chrono>
#include <ostream>

#include "illposed/quasisolution.hpp"
#include "illposed/stabilizer.hpp"
#include "illposed/variational.hpp"

namespace illposed {

namespace {

template <class T>
void put(std::ostream& os, const std::optional<T>& v) {
  os << ',';
  if (!v) return;
  if constexpr (std::is_same_v<T, bool>)
    os << (*v ? "true" : "false");
  else
    os << format_double(*v);
}

double rho_for(const SweepConfig& cfg, const Stabilizer& stab, const ProblemInstance& p) {
  return cfg.rho ? *cfg.rho : cfg.rho_factor * stab.value(p.y_true);
}

void fill_variational(ReportRow& row, const VariationalResult& res, const ProblemInstance& p,
                      const Stabilizer& stab, double delta) {
  row.error_l2 = l2_norm(res.u_delta - p.y_true);
  row.residual_noisy = res.residual_noisy;
  row.residual_exact = l2_norm(res.forward - p.f_exact);
  row.phi_u = res.phi_u;
  row.F_value = res.F_value;
  row.lambda_star = res.lambda_star;
  const auto cert = variational_certificate(res, p, stab, delta);
  row.cert_18 = cert.bound_18_ok;
  row.cert_19 = cert.bound_19_ok;
  row.cert_110 = cert.bound_110_ok;
}

void fill_quasi(ReportRow& row, const QuasiResult& res, const ProblemInstance& p, double delta) {
  row.error_l2 = l2_norm(res.u_delta - p.y_true);
  row.residual_noisy = res.residual_noisy;
  row.residual_exact = l2_norm(res.forward - p.f_exact);
  row.phi_u = res.phi_u;
  row.lambda_star = res.lambda_star;
  const auto cert = quasi_certificate(res, p.f_exact, delta);
  row.cert_24 = cert.bound_24_ok;
  row.cert_26 = cert.bound_26_ok;
}

VariationalResult evaluate_point(const ProblemInstance& p, const GridFunction& f_delta,
                                 double delta, const Stabilizer& stab, const GridFunction& u) {
  GridFunction forward = p.op.apply(u);
  const double r = l2_norm(forward - f_delta);
  const double phi = stab.value(u);
  const double F = r + delta * phi;
  return VariationalResult{u, std::move(forward), F, r, std::nullopt, phi, 0.0, F};
}

}  // namespace

bool ReportRow::certificates_pass() const {
  if (failure) return false;
  const std::optional<bool>* certs[] = {&cert_18, &cert_19, &cert_110, &cert_24, &cert_26};
  bool any = false;
  for (const auto* c : certs) {
    if (!c->has_value()) continue;
    any = true;
    if (!**c) return false;
  }
  return any;
}

bool SweepReport::all_certificates_pass() const {
  for (const auto& r : rows)
    if (!r.certificates_pass()) return false;
  return !rows.empty();
}

bool SweepReport::error_decreasing() const {
  for (const auto& s : summaries)
    if (!s.error_decreasing) return false;
  return true;
}

ReportRow run_solve(const SweepConfig& cfg, const ProblemInstance& problem, double delta,
                    std::size_t delta_index, Method method) {
  if (method == Method::both) throw ConfigError("run_solve: select a single method");
  if (!(delta > 0.0)) throw ConfigError("run_solve: delta must be positive");
  const Stabilizer stab(cfg.alpha0, cfg.alpha1);
  const std::uint64_t seed = delta_seed(cfg.seed, delta_index);
  const NoisyData data = inject_noise(problem.grid, problem.f_exact, delta, seed, cfg.noise_mode);

  ReportRow row;
  row.delta = delta;
  row.method = method;
  const auto start = std::chrono::steady_clock::now();

  if (method == Method::variational) {
    VariationalOptions opts;
    opts.seed = seed;
    try {
      fill_variational(row, minimize_variational(problem.op, data.f_delta, delta, stab, opts),
                       problem, stab, delta);
    } catch (const SolverFailure& e) {
      row.failure = e.what();
      fill_variational(row, evaluate_point(problem, data.f_delta, delta, stab, e.best()),
                       problem, stab, delta);
      row.lambda_star.reset();
    } catch (const Error& e) {
      row.failure = e.what();
      row.cert_18 = row.cert_19 = row.cert_110 = false;
    }
  } else {
    const Compactum k(stab, rho_for(cfg, stab, problem));
    QuasiOptions opts;
    opts.seed = seed;
    try {
      fill_quasi(row, minimize_on_compactum(problem.op, data.f_delta, k, opts), problem, delta);
    } catch (const SolverFailure& e) {
      row.failure = e.what();
      const GridFunction& u = e.best();
      GridFunction forward = problem.op.apply(u);
      const double r = l2_norm(forward - data.f_delta);
      QuasiResult best{u, forward, r, std::nullopt, stab.value(u), r, false, std::nullopt};
      fill_quasi(row, best, problem, delta);
    } catch (const Error& e) {
      row.failure = e.what();
      row.cert_24 = row.cert_26 = false;
    }
  }

  if (cfg.timing)
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                      .count();
  return row;
}

SweepReport run_sweep(const SweepConfig& input) {
  SweepConfig cfg = input;
  cfg.validate();
  const ProblemInstance problem = build_problem(cfg.problem, cfg.n, cfg.params);

  std::vector<Method> methods;
  if (cfg.method != Method::quasi) methods.push_back(Method::variational);
  if (cfg.method != Method::variational) methods.push_back(Method::quasi);

  SweepReport report;
  for (std::size_t i = 0; i < cfg.deltas.size(); ++i)
    for (Method m : methods) report.rows.push_back(run_solve(cfg, problem, cfg.deltas[i], i, m));

  for (Method m : methods) {
    MethodSummary s{m, true, true};
    const ReportRow* largest = nullptr;
    const ReportRow* smallest = nullptr;
    for (const auto& r : report.rows) {
      if (r.method != m) continue;
      s.certificates_pass = s.certificates_pass && r.certificates_pass();
      if (!largest) largest = &r;
      smallest = &r;
    }
    if (largest != smallest)
      s.error_decreasing = largest->error_l2 && smallest->error_l2 &&
                           *smallest->error_l2 < *largest->error_l2;
    report.summaries.push_back(s);
  }
  return report;
}

void write_report_csv(std::ostream& os, const SweepReport& report) {
  os << csv_header << '\n';
  for (const auto& r : report.rows) {
    os << format_double(r.delta) << ',' << to_string(r.method);
    put(os, r.error_l2);
    put(os, r.residual_noisy);
    put(os, r.residual_exact);
    put(os, r.phi_u);
    put(os, r.F_value);
    put(os, r.cert_18);
    put(os, r.cert_19);
    put(os, r.cert_110);
    put(os, r.cert_24);
    put(os, r.cert_26);
    put(os, r.lambda_star);
    put(os, r.wall_ms);
    os << '\n';
  }
}

void write_summary(std::ostream& os, const SweepConfig& cfg, const SweepReport& report) {
  os << "problem " << cfg.problem << ", n = " << cfg.n << ", " << report.rows.size() << " rows\n";
  for (const auto& r : report.rows)
    if (r.failure)
      os << "  solver failure at delta = " << format_double(r.delta) << " (" << to_string(r.method)
         << "): " << *r.failure << '\n';
  for (const auto& s : report.summaries)
    os << "  " << to_string(s.method) << ": certificates "
       << (s.certificates_pass ? "pass" : "FAIL") << ", error decreasing "
       << (s.error_decreasing ? "yes" : "NO") << '\n';
  os << (report.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace illposed
