#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "illposed/gallery.hpp"
#include "illposed/linalg.hpp"

namespace illposed {

enum class Method { variational, quasi, both };

Method parse_method(const std::string& s);
std::string to_string(Method m);

/// Everything needed to reproduce a single solve or a delta sweep.
struct SweepConfig {
  std::string problem = "diag-unbounded";
  std::size_t n = 64;
  ProblemParams params;
  Method method = Method::both;
  std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4};
  std::uint64_t seed = 42;
  NoiseMode noise_mode = NoiseMode::exact_norm;
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  /// Explicit compactum radius; when unset rho = rho_factor * phi(y).
  std::optional<double> rho;
  double rho_factor = 1.5;
  /// CSV destination; empty means standard output.
  std::string out;
  /// Record wall-clock times. Off by default so reports are reproducible bit for bit.
  bool timing = false;

  /// Throws ConfigError on invalid values. Sorts deltas descending.
  void validate();
};

/// Sets one configuration key from its textual value (keys match the CLI flag names).
void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& value);

/// Parses `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> parse_config_text(std::istream& is);
SweepConfig load_config(const std::string& path);

/// One (delta, method) measurement. Empty optionals are written as empty CSV fields.
struct ReportRow {
  double delta = 0.0;
  Method method = Method::variational;
  std::optional<double> error_l2;
  std::optional<double> residual_noisy;
  std::optional<double> residual_exact;
  std::optional<double> phi_u;
  std::optional<double> F_value;
  std::optional<bool> cert_18;
  std::optional<bool> cert_19;
  std::optional<bool> cert_110;
  std::optional<bool> cert_24;
  std::optional<bool> cert_26;
  std::optional<double> lambda_star;
  std::optional<double> wall_ms;
  /// Set when the solver raised; the row then reports its best iterate, if any.
  std::optional<std::string> failure;

  bool certificates_pass() const;
};

struct MethodSummary {
  Method method;
  bool certificates_pass;
  bool error_decreasing;
};

struct SweepReport {
  std::vector<ReportRow> rows;
  std::vector<MethodSummary> summaries;

  bool all_certificates_pass() const;
  bool error_decreasing() const;
  bool passed() const { return all_certificates_pass() && error_decreasing(); }
};

inline constexpr const char* csv_header =
    "delta,method,error_l2,residual_noisy,residual_exact,phi_u,F_value,cert_18,cert_19,cert_110,"
    "cert_24,cert_26,lambda_star,wall_ms";

/// Noise seed of the delta at position `delta_index` in the (descending) delta list.
inline std::uint64_t delta_seed(std::uint64_t base, std::size_t delta_index) {
  return base + delta_index;
}

/// Single solve for one delta and one concrete method.
ReportRow run_solve(const SweepConfig& cfg, const ProblemInstance& problem, double delta,
                    std::size_t delta_index, Method method);

/// All (delta, method) rows in config order, deltas descending, variational before quasi.
SweepReport run_sweep(const SweepConfig& cfg);

void write_report_csv(std::ostream& os, const SweepReport& report);
void write_summary(std::ostream& os, const SweepConfig& cfg, const SweepReport& report);

/// Process exit code: 0 all pass, 2 certificate or convergence verdict failure.
inline int exit_code(const SweepReport& report) { return report.passed() ? 0 : 2; }

}  // namespace illposed
