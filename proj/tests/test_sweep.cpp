#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "illposed/cli.hpp"
#include "illposed/sweep.hpp"

using namespace illposed;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string csv_of(const SweepReport& r) {
  std::ostringstream os;
  write_report_csv(os, r);
  return os.str();
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("row count and header") {
    SweepConfig cfg;
    cfg.problem = "volterra-int";
    cfg.deltas = {1e-1, 1e-2, 1e-3};
    const auto lines = lines_of(csv_of(run_sweep(cfg)));
    REQUIRE(lines.size() == 1 + 3 * 2);
    CHECK(lines[0] ==
          "delta,method,error_l2,residual_noisy,residual_exact,phi_u,F_value,cert_18,cert_19,"
          "cert_110,cert_24,cert_26,lambda_star,wall_ms");
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(fields_of(lines[i]).size() == 14);
  }

  TEST_CASE("rows follow descending deltas, variational before quasi") {
    SweepConfig cfg;
    cfg.problem = "diag-unbounded";
    cfg.deltas = {1e-3, 1e-1, 1e-2};
    const auto report = run_sweep(cfg);
    REQUIRE(report.rows.size() == 6);
    CHECK(report.rows[0].delta == 1e-1);
    CHECK(report.rows[0].method == Method::variational);
    CHECK(report.rows[1].method == Method::quasi);
    CHECK(report.rows[5].delta == 1e-3);
  }

  TEST_CASE("certificate columns of the other method stay empty") {
    SweepConfig cfg;
    cfg.problem = "fredholm-gauss";
    cfg.deltas = {1e-2};
    const auto lines = lines_of(csv_of(run_sweep(cfg)));
    const auto var = fields_of(lines[1]);
    const auto quasi = fields_of(lines[2]);
    CHECK(var[1] == "variational");
    CHECK(var[7] == "true");
    CHECK(var[10].empty());
    CHECK(var[11].empty());
    CHECK(quasi[1] == "quasi");
    CHECK(quasi[6].empty());
    CHECK(quasi[7].empty());
    CHECK(quasi[10] == "true");
    CHECK(var[13].empty());
  }

  TEST_CASE("volterra-int converges for both methods") {
    SweepConfig cfg;
    cfg.problem = "volterra-int";
    const auto report = run_sweep(cfg);
    REQUIRE(report.summaries.size() == 2);
    for (const auto& s : report.summaries) {
      CHECK(s.error_decreasing);
      CHECK(s.certificates_pass);
    }
    CHECK(exit_code(report) == 0);
  }

  TEST_CASE("identical configs give identical csv") {
    SweepConfig cfg;
    cfg.problem = "autoconv";
    cfg.n = 24;
    cfg.deltas = {1e-1, 1e-2};
    CHECK(csv_of(run_sweep(cfg)) == csv_of(run_sweep(cfg)));
  }

  TEST_CASE("run_solve on diag-unbounded") {
    SweepConfig cfg;
    const auto p = build_problem("diag-unbounded", 64);
    const ReportRow row = run_solve(cfg, p, 1e-2, 0, Method::variational);
    CHECK(row.cert_18 == true);
    CHECK(row.cert_19 == true);
    CHECK(row.cert_110 == true);
    CHECK_FALSE(row.wall_ms.has_value());
    CHECK_THROWS_AS(run_solve(cfg, p, 1e-2, 0, Method::both), ConfigError);
  }

  TEST_CASE("config text parsing and validation") {
    std::stringstream text(
        "# study\n"
        "problem = fredholm-gauss   # comment\n"
        "n=32\n"
        "deltas = 1e-2, 1e-1\n"
        "\n"
        "sigma = 0.05\n");
    SweepConfig cfg;
    for (const auto& [k, v] : parse_config_text(text)) apply_setting(cfg, k, v);
    cfg.validate();
    CHECK(cfg.problem == "fredholm-gauss");
    CHECK(cfg.n == 32);
    CHECK(cfg.params.sigma == 0.05);
    CHECK(cfg.deltas == std::vector<double>{1e-1, 1e-2});

    CHECK_THROWS_AS(apply_setting(cfg, "colour", "red"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "n", "ten"), ConfigError);
    std::stringstream bad("problem fredholm\n");
    CHECK_THROWS_AS(parse_config_text(bad), ConfigError);

    SweepConfig neg;
    neg.deltas = {1e-2, -1e-3};
    CHECK_THROWS_AS(neg.validate(), ConfigError);
    SweepConfig small;
    small.n = 3;
    CHECK_THROWS_AS(small.validate(), ConfigError);
  }

  TEST_CASE("cli: non-positive delta is a configuration error with no rows") {
    std::ostringstream out, err;
    CHECK(run_cli({"solve", "--problem", "volterra-int", "--delta", "0"}, out, err) == 1);
    CHECK(out.str().empty());
    CHECK(run_cli({"solve", "--problem", "volterra-int"}, out, err) == 1);
    CHECK(run_cli({"frobnicate"}, out, err) == 1);
  }

  TEST_CASE("cli: solve emits one row per method") {
    std::ostringstream out, err;
    CHECK(run_cli({"solve", "--problem", "diag-unbounded", "--method", "variational", "--delta",
                   "1e-2", "--seed", "42"},
                  out, err) == 0);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 2);
    CHECK(fields_of(lines[1])[1] == "variational");
  }

  TEST_CASE("cli: quasi with rho below phi(y) exits 2") {
    std::ostringstream out, err;
    CHECK(run_cli({"solve", "--problem", "diag-unbounded", "--method", "quasi", "--delta", "1e-3",
                   "--rho-factor", "0.5"},
                  out, err) == 2);
    CHECK(fields_of(lines_of(out.str())[1])[10] == "false");
  }

  TEST_CASE("cli: config file with flag override and output file") {
    const auto dir = std::filesystem::temp_directory_path() / "illposed_cli_test";
    std::filesystem::create_directories(dir);
    const auto cfg_path = dir / "study.cfg";
    const auto csv_path = dir / "out.csv";
    {
      std::ofstream f(cfg_path);
      f << "problem = volterra-int\nmethod = quasi\ndeltas = 1e-1, 1e-2\n";
    }
    std::ostringstream out, err;
    CHECK(run_cli({"sweep", "--config", cfg_path.string(), "--method", "variational", "--out",
                   csv_path.string(), "--timing"},
                  out, err) == 0);
    std::ifstream in(csv_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto lines = lines_of(buf.str());
    REQUIRE(lines.size() == 3);
    CHECK(fields_of(lines[1])[1] == "variational");
    CHECK_FALSE(fields_of(lines[1])[13].empty());
    CHECK(out.str().find("PASS") != std::string::npos);

    std::ostringstream out2, err2;
    CHECK(run_cli({"sweep", "--config", (dir / "missing.cfg").string()}, out2, err2) == 1);
    CHECK(run_cli({"sweep", "--problem", "volterra-int", "--out", (dir / "no/such/dir.csv").string()},
                  out2, err2) == 1);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("cli: explicit rho warns") {
    std::ostringstream out, err;
    run_cli({"solve", "--problem", "volterra-int", "--method", "quasi", "--delta", "1e-2", "--rho",
             "20"},
            out, err);
    CHECK(err.str().find("warning") != std::string::npos);
  }
}
