#include "illposed/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "illposed/sweep.hpp"

namespace illposed {

namespace {

constexpr int exit_config = 1;

struct SettingFlag {
  const char* name;
  const char* help;
};

const SettingFlag setting_flags[] = {
    {"problem", "gallery problem name (default diag-unbounded)"},
    {"n", "grid size, >= 4 (default 64)"},
    {"method", "variational | quasi | both (default both)"},
    {"delta", "single noise level"},
    {"deltas", "comma-separated noise levels (default 1e-1,1e-2,1e-3,1e-4)"},
    {"seed", "base seed; delta i in descending order uses seed + i (default 42)"},
    {"sigma", "kernel width for fredholm-gauss (default 0.1)"},
    {"alpha0", "weight of the L2 term of phi (default 1)"},
    {"alpha1", "weight of the derivative term of phi (default 1)"},
    {"rho", "explicit compactum radius; overrides rho-factor"},
    {"rho-factor", "rho = factor * phi(y) (default 1.5)"},
    {"noise-mode", "exact-norm | bounded (default exact-norm)"},
    {"out", "write CSV here instead of stdout"},
};

struct Flags {
  std::string config;
  bool timing = false;
  std::map<std::string, std::string> values;
};

void add_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "key = value configuration file");
  for (const auto& f : setting_flags)
    cmd->add_option(std::string("--") + f.name, flags.values[f.name], f.help);
  cmd->add_flag("--timing", flags.timing, "record wall_ms per row");
}

SweepConfig resolve(CLI::App* cmd, const Flags& flags) {
  SweepConfig cfg = flags.config.empty() ? SweepConfig{} : load_config(flags.config);
  // Later keys win, so apply `delta` before `deltas`.
  for (const auto& f : setting_flags)
    if (cmd->count(std::string("--") + f.name) > 0)
      apply_setting(cfg, f.name, flags.values.at(f.name));
  if (flags.timing) cfg.timing = true;
  return cfg;
}

int execute(const SweepConfig& cfg, bool single, std::ostream& out, std::ostream& err) {
  if (single && cfg.deltas.size() != 1)
    throw ConfigError("solve takes exactly one noise level (--delta)");
  if (cfg.rho)
    err << "warning: explicit rho; the quasisolution bounds only hold if the true solution lies "
           "in K\n";

  const SweepReport report = run_sweep(cfg);

  if (cfg.out.empty()) {
    write_report_csv(out, report);
    write_summary(err, cfg, report);
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open output file '" << cfg.out << "'\n";
      return exit_config;
    }
    write_report_csv(file, report);
    file.flush();
    if (!file) {
      err << "error: failed writing '" << cfg.out << "'\n";
      return exit_config;
    }
    write_summary(out, cfg, report);
  }
  return exit_code(report);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularized solvers for ill-posed operator equations"};
  app.require_subcommand(1);

  Flags solve_flags;
  Flags sweep_flags;
  CLI::App* solve = app.add_subcommand("solve", "solve at a single noise level");
  CLI::App* sweep = app.add_subcommand("sweep", "convergence study over a list of noise levels");
  add_flags(solve, solve_flags);
  add_flags(sweep, sweep_flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (solve->parsed()) return execute(resolve(solve, solve_flags), true, out, err);
    return execute(resolve(sweep, sweep_flags), false, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }
}

}  // namespace illposed
